//! The semilattice E(Λ) of finite unions of cones αΛ, its Boolean-algebra
//! representation σ, and the executable E-tight ⇔ H-tight equivalence.
//!
//! Elements are stored by their antichain of minimal paths m(a); the zero
//! element is the empty set. E(Λ) is finite for a finite graph and is
//! enumerated exhaustively.

use crate::pgraph::{Graph, PathId};
use crate::rep::{proj_join, Rep};
use crate::report::Report;
use crate::{Error, QMatrix, Result};
use std::collections::BTreeSet;

/// An element of E(Λ): the union ∪_{α ∈ m} αΛ, stored by its minimal paths.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ESet {
    graph: String,
    /// Antichain under ≤, sorted by canonical path rank.
    minimal: Vec<PathId>,
}

impl ESet {
    pub fn zero(g: &Graph) -> ESet {
        ESet {
            graph: g.name().to_string(),
            minimal: Vec::new(),
        }
    }

    /// The principal element αΛ.
    pub fn principal(g: &Graph, alpha: PathId) -> ESet {
        normalize_element(g, &[alpha])
    }

    /// The top element Λ = ∪_v vΛ.
    pub fn top(g: &Graph) -> ESet {
        normalize_element(g, &g.vertices())
    }

    pub fn is_zero(&self) -> bool {
        self.minimal.is_empty()
    }

    pub fn minimal_paths(&self) -> &[PathId] {
        &self.minimal
    }

    /// The underlying path set ∪ αΛ.
    pub fn path_set(&self, g: &Graph) -> BTreeSet<PathId> {
        let mut out = BTreeSet::new();
        for &a in &self.minimal {
            out.extend(g.cone_of(a).iter().copied());
        }
        out
    }

    pub fn render(&self, g: &Graph) -> String {
        g.render_path_set(&self.minimal)
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.graph != g.name() {
            return Err(Error::GraphMismatch(format!(
                "ESet over {} used with graph {}",
                self.graph,
                g.name()
            )));
        }
        Ok(())
    }
}

/// The element ∪ αΛ over the input paths, represented by its minimal paths.
pub fn normalize_element(g: &Graph, paths: &[PathId]) -> ESet {
    let mut minimal: Vec<PathId> = paths
        .iter()
        .copied()
        .filter(|a| !paths.iter().any(|b| b != a && g.leq_paths(*b, *a)))
        .collect();
    g.sort_paths(&mut minimal);
    ESet {
        graph: g.name().to_string(),
        minimal,
    }
}

/// a ≤ b in E(Λ), i.e. containment of the underlying path sets.
pub fn leq_eset(g: &Graph, a: &ESet, b: &ESet) -> bool {
    let bset = b.path_set(g);
    a.minimal.iter().all(|p| bset.contains(p))
}

/// The meet a ∧ b = a ∩ b, computed through MCE over m(a) × m(b).
pub fn meet(g: &Graph, a: &ESet, b: &ESet) -> Result<ESet> {
    a.check_graph(g)?;
    b.check_graph(g)?;
    let mut pool = Vec::new();
    for &al in &a.minimal {
        for &be in &b.minimal {
            pool.extend(g.mce(al, be));
        }
    }
    Ok(normalize_element(g, &pool))
}

/// The join a ∨ b = a ∪ b.
pub fn join_eset(g: &Graph, a: &ESet, b: &ESet) -> Result<ESet> {
    a.check_graph(g)?;
    b.check_graph(g)?;
    let mut pool = a.minimal.clone();
    pool.extend(b.minimal.iter().copied());
    Ok(normalize_element(g, &pool))
}

/// Do a and b intersect (share a nonzero lower bound)? Per the intersection
/// criterion this holds iff some α ∈ m(a), β ∈ m(b) have a common extension.
pub fn intersects(g: &Graph, a: &ESet, b: &ESet) -> Result<bool> {
    a.check_graph(g)?;
    b.check_graph(g)?;
    for &al in &a.minimal {
        for &be in &b.minimal {
            if g.have_common_extension(al, be) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn antichains(
    start: usize,
    n: usize,
    comparable: &[Vec<bool>],
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    out.push(current.clone());
    for j in start..n {
        if current.iter().all(|&i| !comparable[i][j]) {
            current.push(j);
            antichains(j + 1, n, comparable, current, out);
            current.pop();
        }
    }
}

/// Every element of E(Λ): all antichains of the path order, zero included,
/// in canonical order.
pub fn enumerate_all(g: &Graph) -> Vec<ESet> {
    let paths: Vec<PathId> = g.paths_sorted().to_vec();
    let n = paths.len();
    let comparable: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| g.leq_paths(paths[i], paths[j]) || g.leq_paths(paths[j], paths[i]))
                .collect()
        })
        .collect();
    let mut raw: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    antichains(0, n, &comparable, &mut current, &mut raw);
    raw.into_iter()
        .map(|idxs| ESet {
            graph: g.name().to_string(),
            minimal: idxs.into_iter().map(|i| paths[i]).collect(),
        })
        .collect()
}

/// E^{X,Y} = { z ∈ E(Λ) : z ≤ x ∀x ∈ X, z ⊥ y ∀y ∈ Y }.
pub fn exy(g: &Graph, xs: &[ESet], ys: &[ESet]) -> Result<Vec<ESet>> {
    let all = enumerate_all(g);
    let mut out = Vec::new();
    for z in all {
        let mut ok = xs.iter().all(|x| leq_eset(g, &z, x));
        if ok {
            for y in ys {
                if intersects(g, &z, y)? {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(z);
        }
    }
    Ok(out)
}

/// Is Z a cover of F: Z ⊆ F and every nonzero x ∈ F intersects some z ∈ Z?
pub fn is_cover(g: &Graph, zs: &[ESet], f: &[ESet]) -> Result<bool> {
    for z in zs {
        if !f.contains(z) {
            return Err(Error::NotSubset(format!(
                "{} is not in the covered family",
                z.render(g)
            )));
        }
    }
    for x in f {
        if x.is_zero() {
            continue;
        }
        let mut hit = false;
        for z in zs {
            if intersects(g, x, z)? {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Replace a cover by a cover of principal elements βΛ with the same join.
pub fn principal_cover(g: &Graph, zs: &[ESet]) -> Result<Vec<ESet>> {
    let mut pool: Vec<PathId> = Vec::new();
    for z in zs {
        z.check_graph(g)?;
        pool.extend(z.minimal.iter().copied());
    }
    let normalized = normalize_element(g, &pool);
    Ok(normalized
        .minimal
        .iter()
        .map(|&b| ESet::principal(g, b))
        .collect())
}

/// Replace Y by Y' = { y ∧ x_min } with E^{X,Y} = E^{X,Y'} and
/// Y' ⊆ E^{X,∅}. An empty X behaves as the top element.
pub fn reduce_y(g: &Graph, xs: &[ESet], ys: &[ESet]) -> Result<Vec<ESet>> {
    let mut xmin = ESet::top(g);
    for x in xs {
        xmin = meet(g, &xmin, x)?;
    }
    let mut out = Vec::new();
    for y in ys {
        out.push(meet(g, y, &xmin)?);
    }
    Ok(out)
}

/// σ(a) = ⋁_{α ∈ m(a)} q_α inside the representation; zero for the zero
/// element.
pub fn sigma_of(rep: &Rep, a: &ESet) -> Result<QMatrix> {
    a.check_graph(rep.graph())?;
    let mut out = QMatrix::zero(rep.dim());
    for &al in &a.minimal {
        let q = rep.range_projection(al);
        out = proj_join(&out, &q)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ETightMode {
    /// The single-cone criterion: Y = ∅, X = {μΛ}, all covers of E^{μΛ,∅}.
    Restricted,
    /// The full definition over finite X, Y ⊆ E(Λ) and all covers.
    Full,
}

/// Atoms of the Boolean algebra generated by 1 and the range projections:
/// the minimal nonzero products of q's and their complements.
fn boolean_atoms(rep: &Rep) -> Result<Vec<QMatrix>> {
    let g = rep.graph();
    let qs: Vec<QMatrix> = g
        .paths_sorted()
        .iter()
        .map(|&p| rep.range_projection(p))
        .collect();
    for (i, a) in qs.iter().enumerate() {
        for b in qs.iter().skip(i + 1) {
            if !a.commutes_with(b) {
                return Err(Error::NotCommuting(
                    "range projections do not commute".to_string(),
                ));
            }
        }
    }
    let mut atoms = vec![QMatrix::identity(rep.dim())];
    for q in &qs {
        let mut next = Vec::new();
        for a in atoms {
            let inside = a.mul(q)?;
            let outside = a.sub(&inside)?;
            for part in [inside, outside] {
                if !part.is_zero() {
                    next.push(part);
                }
            }
        }
        atoms = next;
    }
    Ok(atoms)
}

/// E-tightness of σ_rep.
///
/// `Restricted` checks the criterion with Y = ∅ and X = {μΛ} for every μ,
/// covers reduced to principal ones. `Full` checks the definition for all
/// finite X, Y ⊆ E(Λ): an instance (X, Y) is exactly equivalent to
/// (⋀X, (⋁Y) ∧ ⋀X) because σ preserves meets and joins, every cover reduces
/// to a principal cover with the same join, and a violating cover exists
/// iff, for some atom of the Boolean algebra below the right-hand side, the
/// principal elements avoiding that atom still cover. The verdict is
/// therefore independent of any cap on |X| and |Y|; `caps` only appears in
/// the report stats.
pub fn is_e_tight(rep: &Rep, mode: ETightMode, caps: usize) -> Result<Report> {
    let g = rep.graph().clone();
    let n = g.len();
    assert!(n <= 64, "path-indexed bitmasks");
    let paths: Vec<PathId> = g.paths_sorted().to_vec();
    let rank_of = |p: PathId| g.canonical_rank(p);

    let atoms = boolean_atoms(rep)?;
    let natoms = atoms.len();
    assert!(natoms <= 64, "atom bitmasks");
    // Atom mask of each path's range projection: atoms below q_α.
    let mut amask: Vec<u64> = vec![0; n];
    for (i, &p) in paths.iter().enumerate() {
        let q = rep.range_projection(p);
        for (k, atom) in atoms.iter().enumerate() {
            if atom.mul(&q)? == *atom {
                amask[i] |= 1 << k;
            }
        }
    }
    // Pairwise common-extension mask.
    let mut ext: Vec<u64> = vec![0; n];
    for (i, &a) in paths.iter().enumerate() {
        for (j, &b) in paths.iter().enumerate() {
            if g.have_common_extension(a, b) {
                ext[i] |= 1 << j;
            }
        }
    }
    // Cone membership masks: cone_mask[i] = ranks of the paths in αΛ.
    let mut cone_mask: Vec<u64> = vec![0; n];
    for (i, &a) in paths.iter().enumerate() {
        for &c in g.cone_of(a) {
            cone_mask[i] |= 1 << rank_of(c);
        }
    }

    let mut report = Report::pass();
    report.record("atoms", natoms as u64);
    report.record("caps", caps as u64);

    let path_set_mask = |e: &ESet| -> u64 {
        let mut m = 0u64;
        for &a in e.minimal_paths() {
            m |= cone_mask[rank_of(a)];
        }
        m
    };
    let sigma_mask = |e: &ESet| -> u64 {
        let mut m = 0u64;
        for &a in e.minimal_paths() {
            m |= amask[rank_of(a)];
        }
        m
    };
    let all_atoms_mask: u64 = if natoms == 64 {
        u64::MAX
    } else {
        (1u64 << natoms) - 1
    };
    // One instance; returns the first atom witnessing a violating cover.
    let check_instance = |x: Option<&ESet>, y: Option<&ESet>| -> Option<usize> {
        let xmask = x.map(&path_set_mask);
        let ydisjoint = |i: usize| -> bool {
            match y {
                None => true,
                Some(yy) => yy
                    .minimal_paths()
                    .iter()
                    .all(|&gamma| ext[i] & (1 << rank_of(gamma)) == 0),
            }
        };
        // Principal members βΛ of E^{X,Y}.
        let mut f_mask = 0u64;
        for i in 0..n {
            let in_x = xmask.map(|m| m & (1 << i) != 0).unwrap_or(true);
            if in_x && ydisjoint(i) {
                f_mask |= 1 << i;
            }
        }
        // Atoms of σ(x) ∧ ¬σ(y); an empty X contributes the unit.
        let rmask = x.map(&sigma_mask).unwrap_or(all_atoms_mask) & !y.map(&sigma_mask).unwrap_or(0);
        for atom in 0..natoms {
            if rmask & (1 << atom) == 0 {
                continue;
            }
            let mut z_mask = 0u64;
            for i in 0..n {
                if f_mask & (1 << i) != 0 && amask[i] & (1 << atom) == 0 {
                    z_mask |= 1 << i;
                }
            }
            let mut covers = true;
            for i in 0..n {
                if f_mask & (1 << i) != 0 && ext[i] & z_mask == 0 {
                    covers = false;
                    break;
                }
            }
            if covers {
                return Some(atom);
            }
        }
        None
    };

    let atom_label = |atom: usize| -> String {
        let m = &atoms[atom];
        let mut labels = Vec::new();
        for (&(r, c), _) in m.entries() {
            if r == c {
                labels.push(rep.basis_labels()[r].clone());
            }
        }
        if labels.is_empty() {
            format!("atom#{}", atom)
        } else {
            format!("atom{{{}}}", labels.join(", "))
        }
    };

    match mode {
        ETightMode::Restricted => {
            let mut instances = 0u64;
            for &mu in &paths {
                instances += 1;
                let x = ESet::principal(&g, mu);
                if let Some(atom) = check_instance(Some(&x), None) {
                    report.add_witness(format!(
                        "X={} Y={{}} misses {}",
                        x.render(&g),
                        atom_label(atom)
                    ));
                }
            }
            report.record("instances", instances);
        }
        ETightMode::Full => {
            let elements = enumerate_all(&g);
            report.record("semilattice size", elements.len() as u64);
            let mut instances = 0u64;
            instances += 1;
            if let Some(atom) = check_instance(None, None) {
                report.add_witness(format!("X={{}} Y={{}} misses {}", atom_label(atom)));
            }
            for y in &elements {
                if y.is_zero() {
                    continue;
                }
                instances += 1;
                if let Some(atom) = check_instance(None, Some(y)) {
                    report.add_witness(format!(
                        "X={{}} Y={} misses {}",
                        y.render(&g),
                        atom_label(atom)
                    ));
                }
            }
            for x in &elements {
                instances += 1;
                if let Some(atom) = check_instance(Some(x), None) {
                    report.add_witness(format!(
                        "X={} Y={{}} misses {}",
                        x.render(&g),
                        atom_label(atom)
                    ));
                }
                let xm = path_set_mask(x);
                for y in &elements {
                    if y.is_zero() || path_set_mask(y) & !xm != 0 {
                        // only y ≤ x matters: (X, Y) ≡ (X, {y ∧ ⋀X})
                        continue;
                    }
                    instances += 1;
                    if let Some(atom) = check_instance(Some(x), Some(y)) {
                        report.add_witness(format!(
                            "X={} Y={} misses {}",
                            x.render(&g),
                            y.render(&g),
                            atom_label(atom)
                        ));
                    }
                }
            }
            report.record("instances", instances);
        }
    }
    Ok(report.finish())
}
