//! Finite P-graphs: validated small categories with a degree functor into a
//! positive cone, satisfying unique factorization. Paths compose backwards:
//! αβ is defined exactly when s(α) = r(β).

use crate::cones::{Cone, Element};
use crate::reductions::Hom;
use crate::report::{Report, Status};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Index into a graph's path table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathData {
    pub id: String,
    pub source: PathId,
    pub range: PathId,
    pub degree: Element,
    pub is_vertex: bool,
}

/// Unvalidated graph data, as assembled by a builder or the file parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphData {
    pub name: String,
    pub cone: Cone,
    pub paths: Vec<PathData>,
    pub compose: BTreeMap<(PathId, PathId), PathId>,
    ids: BTreeMap<String, PathId>,
}

impl GraphData {
    pub fn new(name: &str, cone: Cone) -> Self {
        GraphData {
            name: name.to_string(),
            cone,
            paths: Vec::new(),
            compose: BTreeMap::new(),
            ids: BTreeMap::new(),
        }
    }

    pub fn lookup(&self, id: &str) -> Result<PathId> {
        self.ids
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownPath(id.to_string()))
    }

    pub fn add_vertex(&mut self, id: &str) -> Result<PathId> {
        if self.ids.contains_key(id) {
            return Err(Error::ValidationFailed(format!("duplicate id {}", id)));
        }
        let pid = PathId(self.paths.len());
        self.paths.push(PathData {
            id: id.to_string(),
            source: pid,
            range: pid,
            degree: self.cone.identity(),
            is_vertex: true,
        });
        self.ids.insert(id.to_string(), pid);
        Ok(pid)
    }

    pub fn add_path(
        &mut self,
        id: &str,
        source: &str,
        range: &str,
        degree: Element,
    ) -> Result<PathId> {
        if self.ids.contains_key(id) {
            return Err(Error::ValidationFailed(format!("duplicate id {}", id)));
        }
        let source = self.lookup(source)?;
        let range = self.lookup(range)?;
        for v in [source, range] {
            if !self.paths[v.0].is_vertex {
                return Err(Error::ValidationFailed(format!(
                    "{} endpoint {} is not a vertex",
                    id, self.paths[v.0].id
                )));
            }
        }
        let pid = PathId(self.paths.len());
        self.paths.push(PathData {
            id: id.to_string(),
            source,
            range,
            degree,
            is_vertex: false,
        });
        self.ids.insert(id.to_string(), pid);
        Ok(pid)
    }

    pub fn add_compose(&mut self, alpha: &str, beta: &str, gamma: &str) -> Result<()> {
        let a = self.lookup(alpha)?;
        let b = self.lookup(beta)?;
        let c = self.lookup(gamma)?;
        if let Some(&prev) = self.compose.get(&(a, b)) {
            if prev != c {
                return Err(Error::ValidationFailed(format!(
                    "conflicting composites for ({}, {})",
                    alpha, beta
                )));
            }
        }
        self.compose.insert((a, b), c);
        Ok(())
    }

    /// Identity compositions are implied; fill them in before validating.
    fn fill_identities(&mut self) {
        for i in 0..self.paths.len() {
            let p = PathId(i);
            let (r, s) = (self.paths[i].range, self.paths[i].source);
            self.compose.entry((r, p)).or_insert(p);
            self.compose.entry((p, s)).or_insert(p);
        }
    }
}

/// A validated finite P-graph. Construction goes through [`validate_graph`],
/// so every `Graph` satisfies the category and unique-factorization laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    data: GraphData,
    /// αΛ for each path, as canonically sorted id lists.
    cones_up: Vec<Vec<PathId>>,
    /// Canonical rank of each path: (generator length of degree, id lex).
    rank: Vec<usize>,
    sorted: Vec<PathId>,
}

/// Validate the category, functoriality, and unique-factorization laws.
/// Returns the report and, on pass, the validated graph.
pub fn validate_graph(mut data: GraphData) -> (Report, Option<Graph>) {
    let mut report = Report::pass();
    data.fill_identities();
    let n = data.paths.len();
    let cone = data.cone.clone();
    let pd = |p: PathId| -> &PathData { &data.paths[p.0] };

    report.record("paths", n as u64);

    // Degrees: in the cone; identity exactly on vertices.
    for p in &data.paths {
        if !cone.is_positive(&p.degree) {
            report.add_witness(format!("DegreeNotPositive {}", p.id));
        }
        let is_id = p.degree == cone.identity();
        if p.is_vertex && !is_id {
            report.add_witness(format!("VertexDegreeNotIdentity {}", p.id));
        }
        if !p.is_vertex && is_id {
            report.add_witness(format!("IdentityDegreeNotVertex {}", p.id));
        }
        if p.is_vertex && (p.source != data.ids[&p.id] || p.range != p.source) {
            report.add_witness(format!("VertexEndpoints {}", p.id));
        }
    }
    if report.status != Status::Pass {
        return (report.finish(), None);
    }

    // Compose table keys are exactly the composable pairs.
    for (&(a, b), &c) in &data.compose {
        if pd(a).source != pd(b).range {
            report.add_witness(format!("ComposeNotComposable ({}, {})", pd(a).id, pd(b).id));
            continue;
        }
        if pd(c).range != pd(a).range || pd(c).source != pd(b).source {
            report.add_witness(format!(
                "CompositeEndpoints ({}, {}) = {}",
                pd(a).id,
                pd(b).id,
                pd(c).id
            ));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let (a, b) = (PathId(a), PathId(b));
            if pd(a).source == pd(b).range && !data.compose.contains_key(&(a, b)) {
                report.add_witness(format!("MissingComposite ({}, {})", pd(a).id, pd(b).id));
            }
        }
    }
    if report.status != Status::Pass {
        return (report.finish(), None);
    }

    // Identity neutrality.
    for i in 0..n {
        let p = PathId(i);
        if data.compose[&(pd(p).range, p)] != p || data.compose[&(p, pd(p).source)] != p {
            report.add_witness(format!("IdentityLaw {}", pd(p).id));
        }
    }

    // Functoriality of the degree.
    let mut pairs = 0u64;
    for (&(a, b), &c) in &data.compose {
        pairs += 1;
        let prod = cone
            .mul(&pd(a).degree, &pd(b).degree)
            .expect("degrees fit the cone");
        if prod != pd(c).degree {
            report.add_witness(format!("Functoriality ({}, {})", pd(a).id, pd(b).id));
        }
    }
    report.record("composable pairs", pairs);

    // Associativity on all composable triples.
    let mut triples = 0u64;
    for (&(a, b), &ab) in &data.compose {
        for g in 0..n {
            let g = PathId(g);
            if pd(b).source == pd(g).range {
                triples += 1;
                let bg = data.compose[&(b, g)];
                if data.compose[&(ab, g)] != data.compose[&(a, bg)] {
                    report.add_witness(format!(
                        "Associativity ({}, {}, {})",
                        pd(a).id,
                        pd(b).id,
                        pd(g).id
                    ));
                }
            }
        }
    }
    report.record("triples", triples);

    // Cancellation.
    for (&(a, b), &c) in &data.compose {
        for (&(a2, b2), &c2) in &data.compose {
            if c == c2 {
                if a == a2 && b != b2 {
                    report.add_witness(format!(
                        "LeftCancellation {} = {} {} = {} {}",
                        pd(c).id,
                        pd(a).id,
                        pd(b).id,
                        pd(a2).id,
                        pd(b2).id
                    ));
                }
                if b == b2 && a != a2 {
                    report.add_witness(format!("RightCancellation {}", pd(c).id));
                }
            }
        }
    }
    if report.status != Status::Pass {
        return (report.finish(), None);
    }

    // Unique factorization: for every λ and every p₁ ≤ d(λ), exactly one
    // pair (λ₁, λ₂) with λ₁λ₂ = λ and d(λ₁) = p₁.
    let mut factorizations: Vec<Vec<(PathId, PathId)>> = vec![Vec::new(); n];
    for (&(a, b), &c) in &data.compose {
        factorizations[c.0].push((a, b));
    }
    let mut facts = 0u64;
    for i in 0..n {
        let lam = PathId(i);
        let interval = match cone.interval(&pd(lam).degree) {
            Ok(iv) => iv,
            Err(_) => {
                report.add_witness(format!("DegreeNotPositive {}", pd(lam).id));
                continue;
            }
        };
        for p1 in &interval {
            facts += 1;
            let hits: Vec<&(PathId, PathId)> = factorizations[i]
                .iter()
                .filter(|(a, _)| &pd(*a).degree == p1)
                .collect();
            if hits.len() != 1 {
                report.add_witness(format!(
                    "UniqueFactorization {} has {} factorizations with initial degree {}",
                    pd(lam).id,
                    hits.len(),
                    cone.render(p1)
                ));
            }
        }
        // No factorization may fall outside the interval of the degree.
        for (a, b) in &factorizations[i] {
            if !interval.contains(&pd(*a).degree) {
                report.add_witness(format!(
                    "FactorDegreeOutsideInterval {} = {} {}",
                    pd(lam).id,
                    pd(*a).id,
                    pd(*b).id
                ));
            }
        }
    }
    report.record("factorization splits", facts);

    if report.status != Status::Pass {
        return (report.finish(), None);
    }

    // Assemble the validated graph with canonical path order and cones.
    let mut keyed: Vec<(u64, String, PathId)> = data
        .paths
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let len = cone.gen_length(&p.degree).expect("degree positive");
            (len, p.id.clone(), PathId(i))
        })
        .collect();
    keyed.sort();
    let sorted: Vec<PathId> = keyed.iter().map(|(_, _, p)| *p).collect();
    let mut rank = vec![0usize; n];
    for (r, p) in sorted.iter().enumerate() {
        rank[p.0] = r;
    }
    let mut cones_up: Vec<Vec<PathId>> = vec![Vec::new(); n];
    for (&(a, _), &c) in &data.compose {
        if !cones_up[a.0].contains(&c) {
            cones_up[a.0].push(c);
        }
    }
    for list in &mut cones_up {
        list.sort_by_key(|p| rank[p.0]);
    }

    let graph = Graph {
        data,
        cones_up,
        rank,
        sorted,
    };
    (report.finish(), Some(graph))
}

impl Graph {
    pub fn name(&self) -> &str {
        &self.data.name
    }

    pub fn cone(&self) -> &Cone {
        &self.data.cone
    }

    pub fn data(&self) -> &GraphData {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.paths.is_empty()
    }

    pub fn path(&self, p: PathId) -> &PathData {
        &self.data.paths[p.0]
    }

    pub fn id(&self, p: PathId) -> &str {
        &self.data.paths[p.0].id
    }

    pub fn lookup(&self, id: &str) -> Result<PathId> {
        self.data.lookup(id)
    }

    /// All paths in canonical order: (generator length of degree, id lex).
    pub fn paths_sorted(&self) -> &[PathId] {
        &self.sorted
    }

    pub fn vertices(&self) -> Vec<PathId> {
        self.sorted
            .iter()
            .copied()
            .filter(|p| self.path(*p).is_vertex)
            .collect()
    }

    pub fn canonical_rank(&self, p: PathId) -> usize {
        self.rank[p.0]
    }

    pub fn sort_paths(&self, set: &mut Vec<PathId>) {
        set.sort_by_key(|p| self.rank[p.0]);
        set.dedup();
    }

    pub fn render_path_set(&self, set: &[PathId]) -> String {
        let mut s: Vec<PathId> = set.to_vec();
        self.sort_paths(&mut s);
        format!(
            "{{{}}}",
            s.iter().map(|p| self.id(*p)).collect::<Vec<_>>().join(", ")
        )
    }

    /// The composite αβ; errors when s(α) ≠ r(β).
    pub fn compose_paths(&self, alpha: PathId, beta: PathId) -> Result<PathId> {
        self.data
            .compose
            .get(&(alpha, beta))
            .copied()
            .ok_or_else(|| {
                Error::NotComposable(format!(
                    "s({}) = {} but r({}) = {}",
                    self.id(alpha),
                    self.id(self.path(alpha).source),
                    self.id(beta),
                    self.id(self.path(beta).range)
                ))
            })
    }

    /// αΛ = { αμ : μ ∈ Λ }, canonically sorted.
    pub fn cone_of(&self, alpha: PathId) -> &[PathId] {
        &self.cones_up[alpha.0]
    }

    /// α ≤ β iff β ∈ αΛ.
    pub fn leq_paths(&self, alpha: PathId, beta: PathId) -> bool {
        self.cones_up[alpha.0].contains(&beta)
    }

    pub fn is_maximal(&self, alpha: PathId) -> bool {
        self.cones_up[alpha.0] == [alpha]
    }

    /// The unique factorization λ = λ₁λ₂ with d(λ₁) = p1.
    pub fn factorize(&self, lam: PathId, p1: &Element) -> Result<(PathId, PathId)> {
        if !self.cone().is_positive(p1) || !self.cone().leq(p1, &self.path(lam).degree) {
            return Err(Error::DegreeNotBelow(format!(
                "{} below d({}) = {}",
                self.cone().render(p1),
                self.id(lam),
                self.cone().render(&self.path(lam).degree)
            )));
        }
        for (&(a, b), &c) in &self.data.compose {
            if c == lam && &self.path(a).degree == p1 {
                return Ok((a, b));
            }
        }
        unreachable!("validated graphs factor through every degree split")
    }

    /// Minimal common extensions, computed order-theoretically.
    pub fn mce(&self, alpha: PathId, beta: PathId) -> Vec<PathId> {
        let ce: Vec<PathId> = self.cones_up[alpha.0]
            .iter()
            .copied()
            .filter(|m| self.leq_paths(beta, *m))
            .collect();
        ce.iter()
            .copied()
            .filter(|m| !ce.iter().any(|n| n != m && self.leq_paths(*n, *m)))
            .collect()
    }

    /// Common extensions of degree d(α) ∨ d(β).
    pub fn mdce(&self, alpha: PathId, beta: PathId) -> Vec<PathId> {
        let ce: Vec<PathId> = self.cones_up[alpha.0]
            .iter()
            .copied()
            .filter(|m| self.leq_paths(beta, *m))
            .collect();
        if ce.is_empty() {
            return Vec::new();
        }
        let join = self
            .cone()
            .join(&self.path(alpha).degree, &self.path(beta).degree)
            .expect("degrees are positive")
            .expect("a common extension bounds the degrees");
        ce.into_iter()
            .filter(|m| self.path(*m).degree == join)
            .collect()
    }

    pub fn have_common_extension(&self, alpha: PathId, beta: PathId) -> bool {
        self.cones_up[alpha.0]
            .iter()
            .any(|m| self.leq_paths(beta, *m))
    }

    /// Is E exhaustive for μΛ? Errors when E ⊄ μΛ.
    pub fn is_exhaustive(&self, mu: PathId, set: &[PathId]) -> Result<bool> {
        for a in set {
            if !self.leq_paths(mu, *a) {
                return Err(Error::NotInCorner(format!(
                    "{} is not in {}Λ",
                    self.id(*a),
                    self.id(mu)
                )));
            }
        }
        Ok(self
            .cone_of(mu)
            .iter()
            .all(|nu| set.iter().any(|a| self.have_common_extension(*nu, *a))))
    }

    /// All ⊆-minimal exhaustive subsets of μΛ∖{μ}, canonically ordered.
    /// Sets containing μ give trivially zero bolts and are excluded.
    pub fn minimal_exhaustive_sets(&self, mu: PathId) -> Vec<Vec<PathId>> {
        let candidates: Vec<PathId> = self
            .cone_of(mu)
            .iter()
            .copied()
            .filter(|p| *p != mu)
            .collect();
        assert!(
            candidates.len() <= 24,
            "corner too large for subset enumeration"
        );
        let mut exhaustive: Vec<u32> = Vec::new();
        for mask in 1u32..(1 << candidates.len()) {
            let set: Vec<PathId> = (0..candidates.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| candidates[i])
                .collect();
            if self.is_exhaustive(mu, &set).expect("subset of the corner") {
                exhaustive.push(mask);
            }
        }
        let mut minimal: Vec<u32> = Vec::new();
        let mut masks = exhaustive.clone();
        masks.sort_by_key(|m| m.count_ones());
        for m in masks {
            if !minimal.iter().any(|min| min & m == *min) {
                minimal.push(m);
            }
        }
        let mut sets: Vec<Vec<PathId>> = minimal
            .into_iter()
            .map(|mask| {
                (0..candidates.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| candidates[i])
                    .collect()
            })
            .collect();
        sets.sort_by_key(|s| {
            (
                s.len(),
                s.iter().map(|p| self.rank[p.0]).collect::<Vec<_>>(),
            )
        });
        sets
    }

    /// The same category regraded along φ: degrees become φ(d(λ)).
    /// Errors with the violated law when φ is not a reduction on the
    /// relevant intervals.
    pub fn regrade(&self, hom: &Hom) -> Result<Graph> {
        if hom.domain() != self.cone() {
            return Err(Error::FamilyMismatch(format!(
                "hom domain {} does not match graph cone {}",
                hom.domain().name,
                self.cone().name
            )));
        }
        let mut data = GraphData::new(&self.data.name, hom.codomain().clone());
        for p in &self.data.paths {
            if p.is_vertex {
                data.add_vertex(&p.id)?;
            }
        }
        for p in &self.data.paths {
            if !p.is_vertex {
                let deg = hom.apply(&p.degree)?;
                let src = self.id(p.source).to_string();
                let rng = self.id(p.range).to_string();
                data.add_path(&p.id, &src, &rng, deg)?;
            }
        }
        for (&(a, b), &c) in &self.data.compose {
            if !self.path(a).is_vertex && !self.path(b).is_vertex {
                let (a, b, c) = (
                    self.id(a).to_string(),
                    self.id(b).to_string(),
                    self.id(c).to_string(),
                );
                data.add_compose(&a, &b, &c)?;
            }
        }
        let (report, graph) = validate_graph(data);
        graph.ok_or_else(|| {
            Error::ValidationFailed(
                report
                    .witnesses
                    .first()
                    .cloned()
                    .unwrap_or_else(|| "unknown".to_string()),
            )
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::Dyadic;
    use crate::parse::{builtin_fixture, parse_graph_file};
    use crate::reductions;
    use std::collections::BTreeSet;

    fn m5() -> Graph {
        parse_graph_file("m5", builtin_fixture("m5")).unwrap()
    }

    fn square() -> Graph {
        parse_graph_file("square", builtin_fixture("square")).unwrap()
    }

    fn fork() -> Graph {
        parse_graph_file("fork", builtin_fixture("fork")).unwrap()
    }

    fn fpath() -> Graph {
        parse_graph_file("fpath", builtin_fixture("fpath")).unwrap()
    }

    #[test]
    fn fixtures_validate() {
        assert_eq!(m5().len(), 13);
        assert_eq!(square().len(), 9);
        assert_eq!(fork().len(), 5);
        assert_eq!(fpath().len(), 6);
    }

    #[test]
    fn compose_examples() {
        let g = m5();
        let c3 = g.lookup("c3").unwrap();
        let c2 = g.lookup("c2").unwrap();
        let v2 = g.lookup("v2").unwrap();
        let c1 = g.lookup("c1").unwrap();
        let t1 = g.lookup("t1").unwrap();
        assert_eq!(g.compose_paths(c3, c2).unwrap(), g.lookup("c3c2").unwrap());
        assert_eq!(g.compose_paths(v2, c1).unwrap(), c1);
        assert!(matches!(
            g.compose_paths(c3, t1),
            Err(Error::NotComposable(_))
        ));
    }

    #[test]
    fn factorize_examples() {
        let g = m5();
        let cone = g.cone().clone();
        let top = g.lookup("c3c2t1").unwrap();
        let c = Element::Bs12 {
            a: Dyadic::from_int(1),
            n: 0,
        };
        let t = Element::Bs12 {
            a: Dyadic::from_int(0),
            n: 1,
        };
        let (l, r) = g.factorize(top, &c).unwrap();
        assert_eq!(g.id(l), "c3");
        assert_eq!(g.id(r), "c2t1");
        let (l, r) = g.factorize(top, &cone.identity()).unwrap();
        assert_eq!(g.id(l), "v5");
        assert_eq!(g.id(r), "c3c2t1");
        let c1 = g.lookup("c1").unwrap();
        assert!(matches!(g.factorize(c1, &t), Err(Error::DegreeNotBelow(_))));
    }

    #[test]
    fn recomposition_of_every_factorization() {
        for g in [m5(), square(), fork(), fpath()] {
            for &lam in g.paths_sorted() {
                for p1 in g.cone().interval(&g.path(lam).degree).unwrap() {
                    let (a, b) = g.factorize(lam, &p1).unwrap();
                    assert_eq!(g.compose_paths(a, b).unwrap(), lam);
                    assert_eq!(g.path(a).degree, p1);
                }
            }
        }
    }

    #[test]
    fn mce_examples() {
        let g = m5();
        let idp = |s: &str| g.lookup(s).unwrap();
        assert_eq!(g.mce(idp("c3"), idp("t2")), vec![idp("c3c2t1")]);
        assert_eq!(g.mce(idp("c1"), idp("c1")), vec![idp("c1")]);
        assert_eq!(g.mce(idp("c1"), idp("t1")), vec![]);
        let sq = square();
        assert_eq!(
            sq.mce(sq.lookup("e_h").unwrap(), sq.lookup("e_v").unwrap()),
            vec![sq.lookup("diag").unwrap()]
        );
    }

    #[test]
    fn mce_equals_mdce_and_cone_partition() {
        for g in [m5(), square(), fork(), fpath()] {
            for &a in g.paths_sorted() {
                for &b in g.paths_sorted() {
                    let mce = g.mce(a, b);
                    let mdce = g.mdce(a, b);
                    assert_eq!(mce, mdce, "mce != mdce in {}", g.name());
                    // αΛ ∩ βΛ = ⊔ μΛ over μ ∈ mce(α,β)
                    let inter: BTreeSet<PathId> = g
                        .cone_of(a)
                        .iter()
                        .copied()
                        .filter(|m| g.leq_paths(b, *m))
                        .collect();
                    let mut union: BTreeSet<PathId> = BTreeSet::new();
                    let mut total = 0;
                    for m in &mce {
                        union.extend(g.cone_of(*m).iter().copied());
                        total += g.cone_of(*m).len();
                    }
                    assert_eq!(inter, union);
                    assert_eq!(total, union.len(), "cones overlap in {}", g.name());
                }
            }
        }
    }

    #[test]
    fn exhaustive_examples() {
        let g = m5();
        let v5 = g.lookup("v5").unwrap();
        let c3 = g.lookup("c3").unwrap();
        assert!(g.is_exhaustive(v5, &[c3]).unwrap());
        assert!(!g.is_exhaustive(v5, &[]).unwrap());
        let f = fork();
        let u = f.lookup("u").unwrap();
        let e1 = f.lookup("e1").unwrap();
        assert!(!f.is_exhaustive(u, &[e1]).unwrap());
        let w1 = f.lookup("w1").unwrap();
        assert!(matches!(
            f.is_exhaustive(u, &[w1]),
            Err(Error::NotInCorner(_))
        ));
    }

    #[test]
    fn minimal_exhaustive_sets_examples() {
        let f = fork();
        let u = f.lookup("u").unwrap();
        let sets = f.minimal_exhaustive_sets(u);
        assert_eq!(sets.len(), 1);
        assert_eq!(
            sets[0],
            vec![f.lookup("e1").unwrap(), f.lookup("e2").unwrap()]
        );

        let g = m5();
        let v5 = g.lookup("v5").unwrap();
        let sets = g.minimal_exhaustive_sets(v5);
        let ids: Vec<Vec<&str>> = sets
            .iter()
            .map(|s| s.iter().map(|p| g.id(*p)).collect())
            .collect();
        assert_eq!(
            ids,
            vec![vec!["c3"], vec!["t2"], vec!["c3c2"], vec!["c3c2t1"]]
        );

        let sq = square();
        let a = sq.lookup("A").unwrap();
        let sets = sq.minimal_exhaustive_sets(a);
        let ids: Vec<Vec<&str>> = sets
            .iter()
            .map(|s| s.iter().map(|p| sq.id(*p)).collect())
            .collect();
        assert_eq!(ids, vec![vec!["e_h"], vec!["e_v"], vec!["diag"]]);
    }

    #[test]
    fn validation_catches_missing_composite() {
        let text = builtin_fixture("m5").replace("compose c3 c2 = c3c2\n", "");
        let err = parse_graph_file("m5broken", &text).unwrap_err();
        match err {
            Error::ValidationFailed(msg) => assert!(msg.contains("MissingComposite")),
            other => panic!("unexpected error {:?}", other),
        }
    }

    #[test]
    fn regrade_examples() {
        let sq = square();
        let idhom = reductions::identity_hom(sq.cone().clone());
        let back = sq.regrade(&idhom).unwrap();
        assert_eq!(&back, &sq);

        let fp = fpath();
        let f2z = reductions::catalog_hom("f2_to_z").unwrap();
        let re = fp.regrade(&f2z).unwrap();
        let deg = |s: &str| re.path(re.lookup(s).unwrap()).degree.clone();
        assert_eq!(deg("alpha"), Element::AbelianVec(vec![1]));
        assert_eq!(deg("beta"), Element::AbelianVec(vec![1]));
        assert_eq!(deg("alphabeta"), Element::AbelianVec(vec![2]));

        let sum = reductions::catalog_hom("z2_to_z_sum").unwrap();
        let err = sq.regrade(&sum).unwrap_err();
        match err {
            Error::ValidationFailed(msg) => {
                assert!(msg.contains("UniqueFactorization diag"), "got {}", msg)
            }
            other => panic!("unexpected error {:?}", other),
        }
    }

    #[test]
    fn product_cone_graph_validates() {
        // the commuting square again, but over product(Z, Z) instead of Z²
        let z1 = Cone::free_abelian("z", 1);
        let cone = Cone::product(z1.clone(), z1.clone());
        let h = cone.embed(0, &Element::AbelianVec(vec![1]));
        let v = cone.embed(1, &Element::AbelianVec(vec![1]));
        let hv = cone.mul(&h, &v).unwrap();
        let mut data = GraphData::new("psquare", cone);
        for id in ["A", "B", "C", "D"] {
            data.add_vertex(id).unwrap();
        }
        data.add_path("e_h", "B", "A", h.clone()).unwrap();
        data.add_path("e_v", "C", "A", v.clone()).unwrap();
        data.add_path("x", "D", "B", v).unwrap();
        data.add_path("y", "D", "C", h).unwrap();
        data.add_path("diag", "D", "A", hv).unwrap();
        data.add_compose("e_h", "x", "diag").unwrap();
        data.add_compose("e_v", "y", "diag").unwrap();
        let (report, graph) = validate_graph(data);
        let g = graph.expect("valid product-cone graph");
        assert_eq!(report.status, crate::report::Status::Pass);
        assert_eq!(
            g.mce(g.lookup("e_h").unwrap(), g.lookup("e_v").unwrap()),
            vec![g.lookup("diag").unwrap()]
        );
    }

    #[test]
    fn identity_degree_iff_vertex_on_fixtures() {
        for g in [m5(), square(), fork(), fpath()] {
            for &p in g.paths_sorted() {
                assert_eq!(g.path(p).degree == g.cone().identity(), g.path(p).is_vertex);
            }
        }
    }
}
