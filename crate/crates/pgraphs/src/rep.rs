//! Representations of a P-graph by exact sparse rational matrices: the
//! ultrafilter and left-regular constructions, the T1–T4 relator checks,
//! faithfulness, bolts and tightness, the grading check, and the span
//! dimension of the generated *-algebra.

use crate::cones::Element;
use crate::filters::{translate, ultrafilters, Direction, Filter};
use crate::matrix::star_algebra_span_dim;
use crate::pgraph::{Graph, PathId};
use crate::report::Report;
use crate::{Error, QMatrix, Result};
use num_traits::One;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Ultrafilter,
    LeftRegular,
    Custom,
}

/// A representation: one square rational matrix per path, over a labeled
/// basis. Vertices map to diagonal 0/1 projections in the built-in kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rep {
    graph: Graph,
    kind: RepKind,
    basis_labels: Vec<String>,
    /// Built-in grading of the basis: d(α) for the defining path α.
    basis_grades: Vec<Element>,
    mats: Vec<QMatrix>,
}

/// Which spanning family to close: all t_α t_β*, or only the balanced pairs
/// d(α) = d(β).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpanMode {
    Full,
    Balanced,
}

pub fn build_rep(g: &Graph, kind: RepKind) -> Rep {
    match kind {
        RepKind::Ultrafilter => build_ultrafilter_rep(g),
        RepKind::LeftRegular => build_left_regular_rep(g),
        RepKind::Custom => panic!("custom representations use Rep::with_matrices"),
    }
}

fn build_ultrafilter_rep(g: &Graph) -> Rep {
    let ultras: Vec<Filter> = ultrafilters(g);
    let dim = ultras.len();
    let index_of = |f: &Filter| -> usize {
        ultras
            .iter()
            .position(|u| u == f)
            .expect("translate of an ultrafilter is an ultrafilter")
    };
    let mut mats = Vec::with_capacity(g.len());
    for &lam in (0..g.len()).map(PathId).collect::<Vec<_>>().iter() {
        let mut m = QMatrix::zero(dim);
        for (j, u) in ultras.iter().enumerate() {
            if let Some(moved) = translate(g, lam, u, Direction::Forward).expect("same graph") {
                m.set(index_of(&moved), j, One::one());
            }
        }
        mats.push(m);
    }
    let basis_labels = ultras
        .iter()
        .map(|u| format!("U_{}", g.id(u.top(g))))
        .collect();
    let basis_grades = ultras
        .iter()
        .map(|u| g.path(u.top(g)).degree.clone())
        .collect();
    Rep {
        graph: g.clone(),
        kind: RepKind::Ultrafilter,
        basis_labels,
        basis_grades,
        mats,
    }
}

fn build_left_regular_rep(g: &Graph) -> Rep {
    let basis: Vec<PathId> = g.paths_sorted().to_vec();
    let dim = basis.len();
    let pos = |p: PathId| -> usize { g.canonical_rank(p) };
    let mut mats = Vec::with_capacity(g.len());
    for &mu in (0..g.len()).map(PathId).collect::<Vec<_>>().iter() {
        let mut m = QMatrix::zero(dim);
        for &alpha in &basis {
            if g.path(mu).source == g.path(alpha).range {
                let ma = g.compose_paths(mu, alpha).expect("composable");
                m.set(pos(ma), pos(alpha), One::one());
            }
        }
        mats.push(m);
    }
    let basis_labels = basis.iter().map(|p| format!("e_{}", g.id(*p))).collect();
    let basis_grades = basis.iter().map(|p| g.path(*p).degree.clone()).collect();
    Rep {
        graph: g.clone(),
        kind: RepKind::LeftRegular,
        basis_labels,
        basis_grades,
        mats,
    }
}

impl Rep {
    /// User-supplied representation over an explicit labeled basis.
    pub fn with_matrices(
        graph: Graph,
        basis_labels: Vec<String>,
        basis_grades: Vec<Element>,
        mats: Vec<QMatrix>,
    ) -> Result<Rep> {
        let dim = basis_labels.len();
        if basis_grades.len() != dim {
            return Err(Error::DimensionMismatch(
                "one grade per basis label".to_string(),
            ));
        }
        if mats.len() != graph.len() {
            return Err(Error::DimensionMismatch("one matrix per path".to_string()));
        }
        for m in &mats {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "matrix dim {} vs basis {}",
                    m.dim(),
                    dim
                )));
            }
        }
        Ok(Rep {
            graph,
            kind: RepKind::Custom,
            basis_labels,
            basis_grades,
            mats,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    /// The built-in grading of the basis (degree of the defining path).
    pub fn builtin_grading(&self) -> &[Element] {
        &self.basis_grades
    }

    pub fn matrix(&self, p: PathId) -> &QMatrix {
        &self.mats[p.0]
    }

    /// Replace one path's matrix (for negative tests of the relators).
    pub fn with_replaced(&self, p: PathId, m: QMatrix) -> Rep {
        let mut out = self.clone();
        out.kind = RepKind::Custom;
        out.mats[p.0] = m;
        out
    }

    /// Range projection q_λ = t_λ t_λ*.
    pub fn range_projection(&self, p: PathId) -> QMatrix {
        let t = self.matrix(p);
        t.mul(&t.adjoint()).expect("same dimension")
    }
}

/// Exact verification of the representation relators:
/// T1 vertex projections pairwise orthogonal, T2 composition, T3
/// t_μ*t_μ = t_{s(μ)}, T4 the MCE sum, over all applicable tuples.
pub fn check_relators(rep: &Rep) -> Report {
    let g = rep.graph();
    let mut report = Report::pass();
    let mut checked = 0u64;
    for &v in &g.vertices() {
        let tv = rep.matrix(v);
        if tv.adjoint() != *tv {
            report.add_witness(format!("T1 {} not self-adjoint", g.id(v)));
        }
        for &w in &g.vertices() {
            checked += 1;
            let prod = tv.mul(rep.matrix(w)).expect("same dim");
            let expect = if v == w {
                tv.clone()
            } else {
                QMatrix::zero(rep.dim())
            };
            if prod != expect {
                report.add_witness(format!("T1 ({}, {})", g.id(v), g.id(w)));
            }
        }
    }
    for &mu in g.paths_sorted() {
        for &nu in g.paths_sorted() {
            if g.path(mu).source == g.path(nu).range {
                checked += 1;
                let mn = g.compose_paths(mu, nu).expect("composable");
                let prod = rep.matrix(mu).mul(rep.matrix(nu)).expect("same dim");
                if prod != *rep.matrix(mn) {
                    report.add_witness(format!("T2 ({}, {})", g.id(mu), g.id(nu)));
                }
            }
        }
    }
    for &mu in g.paths_sorted() {
        checked += 1;
        let t = rep.matrix(mu);
        let prod = t.adjoint().mul(t).expect("same dim");
        if prod != *rep.matrix(g.path(mu).source) {
            report.add_witness(format!("T3 {}", g.id(mu)));
        }
    }
    for &mu in g.paths_sorted() {
        for &nu in g.paths_sorted() {
            checked += 1;
            let lhs = rep
                .range_projection(mu)
                .mul(&rep.range_projection(nu))
                .expect("same dim");
            let mut rhs = QMatrix::zero(rep.dim());
            for lam in g.mce(mu, nu) {
                rhs = rhs.add(&rep.range_projection(lam)).expect("same dim");
            }
            if lhs != rhs {
                report.add_witness(format!("T4 ({}, {})", g.id(mu), g.id(nu)));
            }
        }
    }
    report.record("relator instances", checked);
    report.finish()
}

/// Λ-faithful: no path maps to the zero matrix.
pub fn is_faithful(rep: &Rep) -> bool {
    (0..rep.graph().len()).all(|i| !rep.matrix(PathId(i)).is_zero())
}

/// The bolt ∏_{α ∈ E} (q_μ − q_α); factors commute for genuine
/// representations, and the product is taken in canonical order.
pub fn bolt_value(rep: &Rep, mu: PathId, set: &[PathId]) -> Result<QMatrix> {
    let g = rep.graph();
    for a in set {
        if !g.leq_paths(mu, *a) {
            return Err(Error::NotInCorner(format!(
                "{} is not in {}Λ",
                g.id(*a),
                g.id(mu)
            )));
        }
    }
    let qmu = rep.range_projection(mu);
    let mut out = QMatrix::identity(rep.dim());
    let mut sorted = set.to_vec();
    g.sort_paths(&mut sorted);
    for a in sorted {
        let factor = qmu.sub(&rep.range_projection(a))?;
        out = out.mul(&factor)?;
    }
    Ok(out)
}

/// Which exhaustive sets the tightness check quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TightMode {
    /// Minimal exhaustive subsets of μΛ∖{μ}. Sufficient: range projections
    /// commute and subprojections only shrink a bolt, so a vanishing bolt
    /// on a minimal set forces vanishing on every superset, and sets
    /// containing μ vanish trivially.
    Minimal,
    /// Every exhaustive subset of μΛ; cross-validation mode for tiny
    /// graphs (exponential in the corner size).
    AllSubsets,
}

/// Tightness: every bolt over an exhaustive set vanishes. The report
/// carries, for each failing μ, the first failing set in canonical order.
pub fn is_tight_with_mode(rep: &Rep, mode: TightMode) -> Report {
    let g = rep.graph();
    let mut report = Report::pass();
    let mut checked = 0u64;
    for &mu in g.paths_sorted() {
        let sets: Vec<Vec<PathId>> = match mode {
            TightMode::Minimal => g.minimal_exhaustive_sets(mu),
            TightMode::AllSubsets => {
                let corner = g.cone_of(mu).to_vec();
                assert!(corner.len() <= 20, "corner too large for subset mode");
                let mut out = Vec::new();
                for mask in 1u32..(1 << corner.len()) {
                    let set: Vec<PathId> = (0..corner.len())
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| corner[i])
                        .collect();
                    if g.is_exhaustive(mu, &set).expect("subset of the corner") {
                        out.push(set);
                    }
                }
                out
            }
        };
        for set in sets {
            checked += 1;
            let bolt = bolt_value(rep, mu, &set).expect("sets lie in the corner");
            if !bolt.is_zero() {
                report.add_witness(format!("({}, {})", g.id(mu), g.render_path_set(&set)));
                break;
            }
        }
    }
    report.record("bolts", checked);
    report.finish()
}

/// Tightness over the minimal exhaustive sets.
pub fn is_tight(rep: &Rep) -> Report {
    is_tight_with_mode(rep, TightMode::Minimal)
}

/// Does t_μ map each graded basis vector into the span of the d(μ)·p graded
/// ones? A pass certifies a gauge coaction exists.
pub fn grading_check(rep: &Rep, grades: &[Element]) -> Result<bool> {
    if grades.len() != rep.dim() {
        return Err(Error::DimensionMismatch(
            "one grade per basis vector".to_string(),
        ));
    }
    let g = rep.graph();
    let cone = g.cone();
    for &mu in g.paths_sorted() {
        let dm = &g.path(mu).degree;
        let m = rep.matrix(mu);
        for (&(row, col), _) in m.entries() {
            let target = cone.mul(dm, &grades[col])?;
            if grades[row] != target {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dimension of span{t_α t_β*} (Full) or span{t_α t_β* : d(α) = d(β)}
/// (Balanced), closed under products and adjoints with exact Gaussian
/// elimination over the rationals.
pub fn span_dim(rep: &Rep, mode: SpanMode) -> usize {
    let g = rep.graph();
    let mut gens = Vec::new();
    for &a in g.paths_sorted() {
        for &b in g.paths_sorted() {
            if mode == SpanMode::Balanced && g.path(a).degree != g.path(b).degree {
                continue;
            }
            let m = rep.matrix(a).mul(&rep.matrix(b).adjoint()).expect("dim");
            if !m.is_zero() {
                gens.push(m);
            }
        }
    }
    star_algebra_span_dim(rep.dim(), &gens)
}

/// p ∨ q = p + q − pq for commuting projections; exact commutation check.
pub fn proj_join(p: &QMatrix, q: &QMatrix) -> Result<QMatrix> {
    if !p.commutes_with(q) {
        return Err(Error::NotCommuting("projections in a join".to_string()));
    }
    p.add(q)?.sub(&p.mul(q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::builtin_graph;
    use crate::report::Status;

    fn ultra(name: &str) -> Rep {
        build_rep(&builtin_graph(name), RepKind::Ultrafilter)
    }

    fn leftreg(name: &str) -> Rep {
        build_rep(&builtin_graph(name), RepKind::LeftRegular)
    }

    #[test]
    fn m5_ultrafilter_generators_are_matrix_units() {
        let rep = ultra("m5");
        let g = rep.graph().clone();
        assert_eq!(rep.dim(), 5);
        assert_eq!(
            rep.basis_labels(),
            ["U_v1", "U_c1", "U_t1", "U_c2t1", "U_c3c2t1"]
        );
        let unit = |r: usize, c: usize| QMatrix::unit(5, r, c);
        for (path, e) in [
            ("v1", unit(0, 0)),
            ("c1", unit(1, 0)),
            ("t1", unit(2, 0)),
            ("c2t1", unit(3, 0)),
            ("c3c2t1", unit(4, 0)),
            ("c2", unit(3, 2)),
        ] {
            assert_eq!(
                rep.matrix(g.lookup(path).unwrap()),
                &e,
                "wrong matrix for {}",
                path
            );
        }
    }

    #[test]
    fn square_ultrafilter_e_h_maps_u_x_to_u_diag() {
        let rep = ultra("square");
        let g = rep.graph().clone();
        let labels = rep.basis_labels();
        let col = labels.iter().position(|l| l == "U_x").unwrap();
        let row = labels.iter().position(|l| l == "U_diag").unwrap();
        let m = rep.matrix(g.lookup("e_h").unwrap());
        assert_eq!(m.as_unit(), Some((row, col)));
    }

    #[test]
    fn fork_left_regular_is_5_dimensional() {
        let rep = leftreg("fork");
        assert_eq!(rep.dim(), 5);
        assert_eq!(rep.basis_labels(), ["e_u", "e_w1", "e_w2", "e_e1", "e_e2"]);
    }

    #[test]
    fn relators_pass_on_builtin_reps() {
        for name in crate::parse::fixture_names() {
            for rep in [ultra(name), leftreg(name)] {
                let r = check_relators(&rep);
                assert_eq!(r.status, Status::Pass, "{} {:?}", name, rep.kind());
            }
        }
    }

    #[test]
    fn relators_fail_when_a_generator_is_zeroed() {
        let rep = ultra("m5");
        let g = rep.graph().clone();
        let c1 = g.lookup("c1").unwrap();
        let broken = rep.with_replaced(c1, QMatrix::zero(rep.dim()));
        let r = check_relators(&broken);
        assert_eq!(r.status, Status::Fail);
        assert!(r.witnesses.iter().any(|w| w.contains("T3 c1")), "{:?}", r);
        assert!(!is_faithful(&broken));
    }

    #[test]
    fn faithfulness_of_builtin_reps() {
        assert!(is_faithful(&ultra("m5")));
        assert!(is_faithful(&leftreg("m5")));
    }

    #[test]
    fn bolt_values_on_m5() {
        let lr = leftreg("m5");
        let g = lr.graph().clone();
        let v5 = g.lookup("v5").unwrap();
        let c3 = g.lookup("c3").unwrap();
        let bolt = bolt_value(&lr, v5, &[c3]).unwrap();
        // rank-2 projection onto {e_v5, e_t2}
        assert!(bolt.is_projection());
        let rank: usize = bolt.entries().count();
        assert_eq!(rank, 2);
        let labels = lr.basis_labels();
        for (&(r, c), _) in bolt.entries() {
            assert_eq!(r, c);
            assert!(labels[r] == "e_v5" || labels[r] == "e_t2");
        }

        let uf = ultra("m5");
        let g = uf.graph().clone();
        let v5 = g.lookup("v5").unwrap();
        let c3 = g.lookup("c3").unwrap();
        assert!(bolt_value(&uf, v5, &[c3]).unwrap().is_zero());
        // any E containing μ kills the bolt
        assert!(bolt_value(&lr, c3, &[c3]).unwrap().is_zero());
        // E outside the corner errors
        let t1 = g.lookup("t1").unwrap();
        assert!(matches!(
            bolt_value(&uf, v5, &[t1]),
            Err(Error::NotInCorner(_))
        ));
    }

    #[test]
    fn tightness_verdicts() {
        for name in crate::parse::fixture_names() {
            assert_eq!(is_tight(&ultra(name)).status, Status::Pass, "{}", name);
        }
        let r = is_tight(&leftreg("m5"));
        assert_eq!(r.status, Status::Fail);
        assert!(
            r.witnesses.contains(&"(v5, {c3})".to_string()),
            "{:?}",
            r.witnesses
        );
        let r = is_tight(&leftreg("fork"));
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.witnesses, vec!["(u, {e1, e2})".to_string()]);
        // left-regular of fpath and square also fail (non-maximal corners)
        assert_eq!(is_tight(&leftreg("square")).status, Status::Fail);
        assert_eq!(is_tight(&leftreg("fpath")).status, Status::Fail);
    }

    #[test]
    fn user_supplied_representations_are_accepted() {
        let built = ultra("fork");
        let g = built.graph().clone();
        let mats: Vec<QMatrix> = (0..g.len())
            .map(|i| built.matrix(PathId(i)).clone())
            .collect();
        let custom = Rep::with_matrices(
            g.clone(),
            built.basis_labels().to_vec(),
            built.builtin_grading().to_vec(),
            mats,
        )
        .unwrap();
        assert_eq!(custom.kind(), RepKind::Custom);
        assert_eq!(check_relators(&custom).status, Status::Pass);
        // wrong matrix count is a dimension error
        let err = Rep::with_matrices(
            g.clone(),
            built.basis_labels().to_vec(),
            built.builtin_grading().to_vec(),
            vec![QMatrix::zero(4)],
        );
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn tight_modes_agree_on_all_fixtures() {
        for name in crate::parse::fixture_names() {
            for rep in [ultra(name), leftreg(name)] {
                let minimal = is_tight_with_mode(&rep, TightMode::Minimal).status;
                let full = is_tight_with_mode(&rep, TightMode::AllSubsets).status;
                assert_eq!(minimal, full, "{} {:?}", name, rep.kind());
            }
        }
    }

    #[test]
    fn grading_checks() {
        for name in crate::parse::fixture_names() {
            for rep in [ultra(name), leftreg(name)] {
                assert!(
                    grading_check(&rep, rep.builtin_grading()).unwrap(),
                    "{}",
                    name
                );
            }
        }
        let lr = leftreg("m5");
        let id = lr.graph().cone().identity();
        let constant = vec![id; lr.dim()];
        assert!(!grading_check(&lr, &constant).unwrap());
    }

    #[test]
    fn span_dimensions() {
        assert_eq!(span_dim(&ultra("m5"), SpanMode::Full), 25);
        assert_eq!(span_dim(&ultra("m5"), SpanMode::Balanced), 5);
        assert_eq!(span_dim(&ultra("fork"), SpanMode::Full), 8);
    }

    #[test]
    fn range_projections_commute_via_t4() {
        for name in crate::parse::fixture_names() {
            for rep in [ultra(name), leftreg(name)] {
                let g = rep.graph().clone();
                for &a in g.paths_sorted() {
                    for &b in g.paths_sorted() {
                        let qa = rep.range_projection(a);
                        let qb = rep.range_projection(b);
                        let ab = qa.mul(&qb).unwrap();
                        assert_eq!(ab, qb.mul(&qa).unwrap());
                        let mut sum = QMatrix::zero(rep.dim());
                        for lam in g.mce(a, b) {
                            sum = sum.add(&rep.range_projection(lam)).unwrap();
                        }
                        assert_eq!(ab, sum);
                    }
                }
            }
        }
    }

    #[test]
    fn builtin_entries_are_zero_or_one() {
        use num_traits::{One, Zero};
        for name in crate::parse::fixture_names() {
            for rep in [ultra(name), leftreg(name)] {
                for i in 0..rep.graph().len() {
                    for (_, v) in rep.matrix(PathId(i)).entries() {
                        assert!(v.is_one() || v.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn zigzag_span_is_closed_after_one_pass() {
        // the span of { t_α t_β* } is already closed under multiplication,
        // so the closure never grows it
        use crate::matrix::linear_span_dim;
        for name in crate::parse::fixture_names() {
            for rep in [ultra(name), leftreg(name)] {
                let g = rep.graph().clone();
                let mut gens = Vec::new();
                for &a in g.paths_sorted() {
                    for &b in g.paths_sorted() {
                        let m = rep.matrix(a).mul(&rep.matrix(b).adjoint()).unwrap();
                        if !m.is_zero() {
                            gens.push(m);
                        }
                    }
                }
                let linear = linear_span_dim(rep.dim(), &gens);
                assert_eq!(linear, span_dim(&rep, SpanMode::Full), "{}", name);
            }
        }
    }

    #[test]
    fn zigzag_product_formula() {
        // (t_α t_β*)(t_μ t_ν*) = Σ_{λ ∈ MCE(β,μ)} t_{α(β⁻¹λ)} t_{ν(μ⁻¹λ)}*
        // for source-compatible pairs; zero otherwise.
        for name in crate::parse::fixture_names() {
            for rep in [ultra(name), leftreg(name)] {
                let g = rep.graph().clone();
                let quotient = |beta: PathId, lam: PathId| -> PathId {
                    *g.paths_sorted()
                        .iter()
                        .find(|&&x| g.compose_paths(beta, x) == Ok(lam))
                        .expect("λ ∈ βΛ factors through β")
                };
                let mut same_source: Vec<(PathId, PathId)> = Vec::new();
                for &a in g.paths_sorted() {
                    for &b in g.paths_sorted() {
                        if g.path(a).source == g.path(b).source {
                            same_source.push((a, b));
                        }
                    }
                }
                for &(a, b) in &same_source {
                    let left = rep.matrix(a).mul(&rep.matrix(b).adjoint()).unwrap();
                    for &(m, nv) in &same_source {
                        let right = rep.matrix(m).mul(&rep.matrix(nv).adjoint()).unwrap();
                        let lhs = left.mul(&right).unwrap();
                        let mut rhs = QMatrix::zero(rep.dim());
                        for lam in g.mce(b, m) {
                            let bq = quotient(b, lam);
                            let mq = quotient(m, lam);
                            let ta = rep.matrix(g.compose_paths(a, bq).unwrap());
                            let tn = rep.matrix(g.compose_paths(nv, mq).unwrap());
                            rhs = rhs.add(&ta.mul(&tn.adjoint()).unwrap()).unwrap();
                        }
                        assert_eq!(lhs, rhs, "zigzag mismatch in {}", name);
                    }
                }
            }
        }
    }

    #[test]
    fn proj_join_examples() {
        let e11: QMatrix = QMatrix::unit(2, 0, 0);
        let e22: QMatrix = QMatrix::unit(2, 1, 1);
        assert_eq!(proj_join(&e11, &e22).unwrap(), QMatrix::identity(2));
        assert_eq!(proj_join(&e11, &e11).unwrap(), e11);
        let uf = ultra("m5");
        let g = uf.graph().clone();
        let qc3 = uf.range_projection(g.lookup("c3").unwrap());
        let qt2 = uf.range_projection(g.lookup("t2").unwrap());
        assert_eq!(proj_join(&qc3, &qt2).unwrap(), QMatrix::unit(5, 4, 4));
        let n: QMatrix = QMatrix::unit(2, 0, 1);
        assert!(matches!(
            proj_join(&n, &n.adjoint()),
            Err(Error::NotCommuting(_))
        ));
    }

    #[test]
    fn left_regular_bolts_vanish_iff_mu_in_set() {
        for name in crate::parse::fixture_names() {
            let rep = leftreg(name);
            let g = rep.graph().clone();
            for &mu in g.paths_sorted() {
                let corner: Vec<PathId> = g.cone_of(mu).to_vec();
                for mask in 1u32..(1 << corner.len()) {
                    let set: Vec<PathId> = (0..corner.len())
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| corner[i])
                        .collect();
                    if !g.is_exhaustive(mu, &set).unwrap() {
                        continue;
                    }
                    let bolt = bolt_value(&rep, mu, &set).unwrap();
                    assert_eq!(
                        bolt.is_zero(),
                        set.contains(&mu),
                        "μ={} E={} in {}",
                        g.id(mu),
                        g.render_path_set(&set),
                        name
                    );
                }
            }
        }
    }
}
