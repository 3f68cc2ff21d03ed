//! Ordered groups: element arithmetic, positive-cone membership, order
//! predicates, intervals, joins, and the free-product/wreath codecs.
//!
//! Built-in families: free groups with free positive cones, free abelian
//! groups with ℕᵏ, the Baumslag–Solitar group BS(1,2) = ⟨c,t | tc=c²t⟩ with
//! either the {c,t}* or the {t,ct}* cone, and direct products, free products
//! and restricted wreath products of the above. BS(1,2) is realized as pairs
//! (a, n) with a a dyadic rational, multiplying by
//! (a,m)(b,n) = (a + 2^m b, m+n); c = (1,0) and t = (0,1).

use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Dyadic rational num / 2^exp, kept in lowest terms (exp = 0 or num odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dyadic {
    num: i64,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: i64, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.reduce();
        d
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { num: n, exp: 0 }
    }

    pub fn zero() -> Self {
        Dyadic { num: 0, exp: 0 }
    }

    fn reduce(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        while self.exp > 0 && self.num % 2 == 0 {
            self.num /= 2;
            self.exp -= 1;
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exp == 0
    }

    pub fn integer_value(&self) -> Option<i64> {
        self.is_integer().then_some(self.num)
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    /// Denominator 2^exp.
    pub fn den(&self) -> i64 {
        1i64 << self.exp
    }

    /// Multiply by 2^k (k may be negative).
    pub fn mul_pow2(self, k: i64) -> Dyadic {
        if self.num == 0 {
            return self;
        }
        let e = self.exp as i64 - k;
        if e <= 0 {
            Dyadic {
                num: self.num << (-e) as u32,
                exp: 0,
            }
        } else {
            Dyadic::new(self.num, e as u32)
        }
    }
}

impl std::ops::Add for Dyadic {
    type Output = Dyadic;

    fn add(self, other: Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = self.num << (e - self.exp);
        let b = other.num << (e - other.exp);
        Dyadic::new(a + b, e)
    }
}

impl std::ops::Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den())
    }
}

/// Group element, one variant per family. Values are canonical forms, so
/// derived equality is mathematical equality in the group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    /// Freely reduced word: syllables (generator index, nonzero exponent),
    /// adjacent generators distinct.
    FreeWord(Vec<(usize, i64)>),
    /// Integer vector in ℤᵏ.
    AbelianVec(Vec<i64>),
    /// BS(1,2) element (a, n).
    Bs12 { a: Dyadic, n: i64 },
    /// Direct-product pair.
    Pair(Box<Element>, Box<Element>),
    /// Free-product normal form: alternating syllables (factor, element),
    /// each element nonidentity, adjacent factors distinct.
    AltWord(Vec<(u8, Element)>),
    /// Wreath-product element (f, h): finitely supported f stored as a
    /// sorted association list keyed by H-elements, no identity values.
    WreathElem {
        support: Vec<(Element, Element)>,
        shift: Box<Element>,
    },
}

/// Kind selector for [`Cone::group_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOpKind {
    Mul,
    Inv,
    Id,
}

/// Cone family: the group, its generators, and the membership structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Free { gens: Vec<String> },
    FreeAbelian { rank: usize },
    Bs12Ct,
    Bs12Q,
    Product(Box<Cone>, Box<Cone>),
    FreeProd(Box<Cone>, Box<Cone>),
    Wreath(Box<Cone>, Box<Cone>),
}

/// An ordered group (G, P): group structure plus decidable membership in the
/// positive cone P, with the induced left-invariant order a ≤ b ⇔ a⁻¹b ∈ P.
///
/// Equality is structural on the family; the name is a label only.
#[derive(Debug, Clone, Eq)]
pub struct Cone {
    pub name: String,
    pub family: Family,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
    }
}

impl Cone {
    pub fn free(name: &str, gens: &[&str]) -> Cone {
        Cone {
            name: name.to_string(),
            family: Family::Free {
                gens: gens.iter().map(|s| s.to_string()).collect(),
            },
        }
    }

    pub fn free_abelian(name: &str, rank: usize) -> Cone {
        Cone {
            name: name.to_string(),
            family: Family::FreeAbelian { rank },
        }
    }

    /// (BS(1,2), {c,t}*).
    pub fn bs12_ct() -> Cone {
        Cone {
            name: "bs12_ct".to_string(),
            family: Family::Bs12Ct,
        }
    }

    /// (BS(1,2), {t,ct}*).
    pub fn bs12_q() -> Cone {
        Cone {
            name: "bs12_q".to_string(),
            family: Family::Bs12Q,
        }
    }

    pub fn product(a: Cone, b: Cone) -> Cone {
        Cone {
            name: format!("product({},{})", a.name, b.name),
            family: Family::Product(Box::new(a), Box::new(b)),
        }
    }

    pub fn free_product(a: Cone, b: Cone) -> Cone {
        Cone {
            name: format!("freeprod({},{})", a.name, b.name),
            family: Family::FreeProd(Box::new(a), Box::new(b)),
        }
    }

    pub fn wreath(a: Cone, b: Cone) -> Cone {
        Cone {
            name: format!("wreath({},{})", a.name, b.name),
            family: Family::Wreath(Box::new(a), Box::new(b)),
        }
    }

    /// Names used by free_abelian generators: `x` at rank 1, else `x1..xk`.
    fn abelian_gen_names(rank: usize) -> Vec<String> {
        if rank == 1 {
            vec!["x".to_string()]
        } else {
            (1..=rank).map(|i| format!("x{}", i)).collect()
        }
    }

    /// Group generators with names, in canonical order.
    pub fn g_generators(&self) -> Vec<(String, Element)> {
        match &self.family {
            Family::Free { gens } => gens
                .iter()
                .enumerate()
                .map(|(i, g)| (g.clone(), Element::FreeWord(vec![(i, 1)])))
                .collect(),
            Family::FreeAbelian { rank } => Cone::abelian_gen_names(*rank)
                .into_iter()
                .enumerate()
                .map(|(i, name)| {
                    let mut v = vec![0; *rank];
                    v[i] = 1;
                    (name, Element::AbelianVec(v))
                })
                .collect(),
            Family::Bs12Ct | Family::Bs12Q => vec![
                (
                    "c".to_string(),
                    Element::Bs12 {
                        a: Dyadic::from_int(1),
                        n: 0,
                    },
                ),
                (
                    "t".to_string(),
                    Element::Bs12 {
                        a: Dyadic::zero(),
                        n: 1,
                    },
                ),
            ],
            Family::Product(a, b) | Family::FreeProd(a, b) | Family::Wreath(a, b) => {
                let mut out = Vec::new();
                for (name, g) in a.g_generators() {
                    out.push((format!("1:{}", name), self.embed(0, &g)));
                }
                for (name, h) in b.g_generators() {
                    out.push((format!("2:{}", name), self.embed(1, &h)));
                }
                out
            }
        }
    }

    /// Positive-cone generators with names, in canonical order.
    pub fn p_generators(&self) -> Vec<(String, Element)> {
        match &self.family {
            Family::Free { .. } | Family::FreeAbelian { .. } | Family::Bs12Ct => {
                self.g_generators()
            }
            Family::Bs12Q => vec![
                (
                    "t".to_string(),
                    Element::Bs12 {
                        a: Dyadic::zero(),
                        n: 1,
                    },
                ),
                (
                    "ct".to_string(),
                    Element::Bs12 {
                        a: Dyadic::from_int(1),
                        n: 1,
                    },
                ),
            ],
            Family::Product(a, b) | Family::FreeProd(a, b) | Family::Wreath(a, b) => {
                let mut out = Vec::new();
                for (name, g) in a.p_generators() {
                    out.push((format!("1:{}", name), self.embed(0, &g)));
                }
                for (name, h) in b.p_generators() {
                    out.push((format!("2:{}", name), self.embed(1, &h)));
                }
                out
            }
        }
    }

    /// Embed a factor element into a composite family (0 = left, 1 = right).
    pub fn embed(&self, side: u8, e: &Element) -> Element {
        match &self.family {
            Family::Product(a, b) => {
                if side == 0 {
                    Element::Pair(Box::new(e.clone()), Box::new(b.identity()))
                } else {
                    Element::Pair(Box::new(a.identity()), Box::new(e.clone()))
                }
            }
            Family::FreeProd(a, b) => {
                let id = if side == 0 {
                    a.identity()
                } else {
                    b.identity()
                };
                if *e == id {
                    Element::AltWord(vec![])
                } else {
                    Element::AltWord(vec![(side, e.clone())])
                }
            }
            Family::Wreath(a, b) => {
                if side == 0 {
                    if *e == a.identity() {
                        self.identity()
                    } else {
                        Element::WreathElem {
                            support: vec![(b.identity(), e.clone())],
                            shift: Box::new(b.identity()),
                        }
                    }
                } else {
                    Element::WreathElem {
                        support: vec![],
                        shift: Box::new(e.clone()),
                    }
                }
            }
            _ => panic!("embed on a non-composite family"),
        }
    }

    pub fn identity(&self) -> Element {
        match &self.family {
            Family::Free { .. } => Element::FreeWord(vec![]),
            Family::FreeAbelian { rank } => Element::AbelianVec(vec![0; *rank]),
            Family::Bs12Ct | Family::Bs12Q => Element::Bs12 {
                a: Dyadic::zero(),
                n: 0,
            },
            Family::Product(a, b) => Element::Pair(Box::new(a.identity()), Box::new(b.identity())),
            Family::FreeProd(_, _) => Element::AltWord(vec![]),
            Family::Wreath(_, b) => Element::WreathElem {
                support: vec![],
                shift: Box::new(b.identity()),
            },
        }
    }

    /// Does the element's variant shape match this family (recursively)?
    pub fn element_fits(&self, e: &Element) -> bool {
        match (&self.family, e) {
            (Family::Free { .. }, Element::FreeWord(_)) => true,
            (Family::FreeAbelian { rank }, Element::AbelianVec(v)) => v.len() == *rank,
            (Family::Bs12Ct | Family::Bs12Q, Element::Bs12 { .. }) => true,
            (Family::Product(a, b), Element::Pair(l, r)) => a.element_fits(l) && b.element_fits(r),
            (Family::FreeProd(a, b), Element::AltWord(syl)) => syl
                .iter()
                .all(|(f, x)| (*f == 0 && a.element_fits(x)) || (*f == 1 && b.element_fits(x))),
            (Family::Wreath(a, b), Element::WreathElem { support, shift }) => {
                b.element_fits(shift)
                    && support
                        .iter()
                        .all(|(h, g)| b.element_fits(h) && a.element_fits(g))
            }
            _ => false,
        }
    }

    fn fit(&self, e: &Element) -> Result<()> {
        if self.element_fits(e) {
            Ok(())
        } else {
            Err(Error::FamilyMismatch(format!(
                "element {:?} does not belong to cone {}",
                e, self.name
            )))
        }
    }

    /// Uniform entry point over mul/inv/id, per the operation catalog.
    pub fn group_op(&self, kind: GroupOpKind, args: &[Element]) -> Result<Element> {
        match kind {
            GroupOpKind::Id => Ok(self.identity()),
            GroupOpKind::Inv => {
                let [x] = args else {
                    return Err(Error::FamilyMismatch("inv takes one argument".into()));
                };
                self.inv(x)
            }
            GroupOpKind::Mul => {
                let [x, y] = args else {
                    return Err(Error::FamilyMismatch("mul takes two arguments".into()));
                };
                self.mul(x, y)
            }
        }
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.fit(x)?;
        self.fit(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    fn mul_unchecked(&self, x: &Element, y: &Element) -> Element {
        match (&self.family, x, y) {
            (Family::Free { .. }, Element::FreeWord(a), Element::FreeWord(b)) => {
                let mut out: Vec<(usize, i64)> = a.clone();
                for &(g, e) in b {
                    match out.last_mut() {
                        Some((g0, e0)) if *g0 == g => {
                            *e0 += e;
                            if *e0 == 0 {
                                out.pop();
                            }
                        }
                        _ => out.push((g, e)),
                    }
                }
                Element::FreeWord(out)
            }
            (Family::FreeAbelian { .. }, Element::AbelianVec(a), Element::AbelianVec(b)) => {
                Element::AbelianVec(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (
                Family::Bs12Ct | Family::Bs12Q,
                Element::Bs12 { a, n: m },
                Element::Bs12 { a: b, n },
            ) => Element::Bs12 {
                a: *a + b.mul_pow2(*m),
                n: m + n,
            },
            (Family::Product(fa, fb), Element::Pair(l1, r1), Element::Pair(l2, r2)) => {
                Element::Pair(
                    Box::new(fa.mul_unchecked(l1, l2)),
                    Box::new(fb.mul_unchecked(r1, r2)),
                )
            }
            (Family::FreeProd(fa, fb), Element::AltWord(s1), Element::AltWord(s2)) => {
                let mut stack: Vec<(u8, Element)> = s1.clone();
                for (f, e) in s2 {
                    match stack.last_mut() {
                        Some((f0, e0)) if f0 == f => {
                            let factor = if *f == 0 { fa } else { fb };
                            let prod = factor.mul_unchecked(e0, e);
                            if prod == factor.identity() {
                                stack.pop();
                            } else {
                                *e0 = prod;
                            }
                        }
                        _ => stack.push((*f, e.clone())),
                    }
                }
                Element::AltWord(stack)
            }
            (
                Family::Wreath(fa, fb),
                Element::WreathElem {
                    support: f1,
                    shift: h1,
                },
                Element::WreathElem {
                    support: f2,
                    shift: h2,
                },
            ) => {
                // (f1, h1)(f2, h2) = (f1 · α_{h1}(f2), h1 h2)
                let mut map: BTreeMap<Element, Element> = f1.iter().cloned().collect();
                for (k, v) in f2 {
                    let key = fb.mul_unchecked(h1, k);
                    let cur = map.remove(&key).unwrap_or_else(|| fa.identity());
                    let prod = fa.mul_unchecked(&cur, v);
                    if prod != fa.identity() {
                        map.insert(key, prod);
                    }
                }
                Element::WreathElem {
                    support: map.into_iter().collect(),
                    shift: Box::new(fb.mul_unchecked(h1, h2)),
                }
            }
            _ => unreachable!("variants checked by fit"),
        }
    }

    pub fn inv(&self, x: &Element) -> Result<Element> {
        self.fit(x)?;
        Ok(self.inv_unchecked(x))
    }

    fn inv_unchecked(&self, x: &Element) -> Element {
        match (&self.family, x) {
            (Family::Free { .. }, Element::FreeWord(a)) => {
                Element::FreeWord(a.iter().rev().map(|&(g, e)| (g, -e)).collect())
            }
            (Family::FreeAbelian { .. }, Element::AbelianVec(a)) => {
                Element::AbelianVec(a.iter().map(|p| -p).collect())
            }
            (Family::Bs12Ct | Family::Bs12Q, Element::Bs12 { a, n }) => Element::Bs12 {
                a: (-*a).mul_pow2(-n),
                n: -n,
            },
            (Family::Product(fa, fb), Element::Pair(l, r)) => {
                Element::Pair(Box::new(fa.inv_unchecked(l)), Box::new(fb.inv_unchecked(r)))
            }
            (Family::FreeProd(fa, fb), Element::AltWord(s)) => Element::AltWord(
                s.iter()
                    .rev()
                    .map(|(f, e)| {
                        let factor = if *f == 0 { fa } else { fb };
                        (*f, factor.inv_unchecked(e))
                    })
                    .collect(),
            ),
            (Family::Wreath(fa, fb), Element::WreathElem { support, shift }) => {
                let hinv = fb.inv_unchecked(shift);
                let support = support
                    .iter()
                    .map(|(k, v)| (fb.mul_unchecked(&hinv, k), fa.inv_unchecked(v)))
                    .collect::<BTreeMap<_, _>>()
                    .into_iter()
                    .collect();
                Element::WreathElem {
                    support,
                    shift: Box::new(hinv),
                }
            }
            _ => unreachable!("variants checked by fit"),
        }
    }

    pub fn pow(&self, x: &Element, k: i64) -> Result<Element> {
        self.fit(x)?;
        let base = if k < 0 {
            self.inv_unchecked(x)
        } else {
            x.clone()
        };
        let mut out = self.identity();
        for _ in 0..k.unsigned_abs() {
            out = self.mul_unchecked(&out, &base);
        }
        Ok(out)
    }

    /// Membership in the positive cone P.
    pub fn is_positive(&self, g: &Element) -> bool {
        if !self.element_fits(g) {
            return false;
        }
        match (&self.family, g) {
            (Family::Free { .. }, Element::FreeWord(s)) => s.iter().all(|&(_, e)| e > 0),
            (Family::FreeAbelian { .. }, Element::AbelianVec(v)) => v.iter().all(|&x| x >= 0),
            (Family::Bs12Ct, Element::Bs12 { a, n }) => a.is_integer() && a.num() >= 0 && *n >= 0,
            (Family::Bs12Q, Element::Bs12 { a, n }) => {
                a.is_integer() && *n >= 0 && *n < 63 && a.num() >= 0 && a.num() < (1i64 << *n)
            }
            (Family::Product(fa, fb), Element::Pair(l, r)) => {
                fa.is_positive(l) && fb.is_positive(r)
            }
            (Family::FreeProd(fa, fb), Element::AltWord(s)) => s.iter().all(|(f, e)| {
                if *f == 0 {
                    fa.is_positive(e)
                } else {
                    fb.is_positive(e)
                }
            }),
            (Family::Wreath(_, _), w) => self.wreath_decode(w).is_some(),
            _ => false,
        }
    }

    /// a ≤ b ⇔ a⁻¹b ∈ P.
    pub fn leq(&self, a: &Element, b: &Element) -> bool {
        if !self.element_fits(a) || !self.element_fits(b) {
            return false;
        }
        let step = self.mul_unchecked(&self.inv_unchecked(a), b);
        self.is_positive(&step)
    }

    /// Least common upper bound of two positives, or None when no common
    /// upper bound exists.
    pub fn join(&self, x: &Element, y: &Element) -> Result<Option<Element>> {
        for v in [x, y] {
            if !self.is_positive(v) {
                return Err(Error::NotPositive(self.render(v)));
            }
        }
        Ok(self.join_unchecked(x, y))
    }

    fn join_unchecked(&self, x: &Element, y: &Element) -> Option<Element> {
        if self.leq(x, y) {
            return Some(y.clone());
        }
        if self.leq(y, x) {
            return Some(x.clone());
        }
        match (&self.family, x, y) {
            (Family::Free { .. }, _, _) | (Family::Bs12Q, _, _) => None,
            (Family::FreeAbelian { .. }, Element::AbelianVec(a), Element::AbelianVec(b)) => Some(
                Element::AbelianVec(a.iter().zip(b).map(|(p, q)| *p.max(q)).collect()),
            ),
            (Family::Bs12Ct, Element::Bs12 { a, n: m }, Element::Bs12 { a: b, n }) => {
                // join((a,m),(b,n)) for m ≤ n exists iff a ≡ b (mod 2^m);
                // result (x, max(m,n)) with x the least value ≥ max(a,b)
                // congruent to b mod 2^n (and hence to a mod 2^m).
                let (a, m, b, n) = if m <= n {
                    (a.num(), *m, b.num(), *n)
                } else {
                    (b.num(), *n, a.num(), *m)
                };
                let mm = 1i64 << m.min(62);
                if a.rem_euclid(mm) != b.rem_euclid(mm) {
                    return None;
                }
                let nn = 1i64 << n.min(62);
                let lo = a.max(b);
                let mut xval = b + ((lo - b).div_euclid(nn)) * nn;
                if xval < lo {
                    xval += nn;
                }
                Some(Element::Bs12 {
                    a: Dyadic::from_int(xval),
                    n,
                })
            }
            (Family::Product(fa, fb), Element::Pair(l1, r1), Element::Pair(l2, r2)) => {
                let l = fa.join_unchecked(l1, l2)?;
                let r = fb.join_unchecked(r1, r2)?;
                Some(Element::Pair(Box::new(l), Box::new(r)))
            }
            (Family::FreeProd(fa, fb), Element::AltWord(s1), Element::AltWord(s2)) => {
                // Incomparable positives have a join only when they share all
                // syllables but the last, and the last syllables sit in the
                // same factor: prefix · (r1 ∨ r2).
                let common = s1.iter().zip(s2.iter()).take_while(|(a, b)| a == b).count();
                let (r1, r2) = (&s1[common..], &s2[common..]);
                if r1.len() != 1 || r2.len() != 1 || r1[0].0 != r2[0].0 {
                    return None;
                }
                let factor = if r1[0].0 == 0 { fa } else { fb };
                let j = factor.join_unchecked(&r1[0].1, &r2[0].1)?;
                let mut out = s1[..common].to_vec();
                out.push((r1[0].0, j));
                Some(Element::AltWord(out))
            }
            (Family::Wreath(fa, fb), _, _) => {
                // The wreath cone is order-isomorphic to the free-product
                // cone, so compute the join there and re-encode.
                let fp = Cone::free_product((**fa).clone(), (**fb).clone());
                let dx = self.wreath_decode(x)?;
                let dy = self.wreath_decode(y)?;
                let j = fp.join_unchecked(&dx, &dy)?;
                Some(
                    self.wreath_encode(&j)
                        .expect("join of positives is positive"),
                )
            }
            _ => unreachable!("variants checked by is_positive"),
        }
    }

    /// The finite interval [1, p] = { x ∈ P : x ≤ p }, sorted canonically.
    pub fn interval(&self, p: &Element) -> Result<Vec<Element>> {
        if !self.is_positive(p) {
            return Err(Error::NotPositive(self.render(p)));
        }
        let mut out: BTreeSet<Element> = BTreeSet::new();
        self.interval_into(p, &mut out);
        Ok(out.into_iter().collect())
    }

    fn interval_into(&self, p: &Element, out: &mut BTreeSet<Element>) {
        match (&self.family, p) {
            (Family::Free { .. }, Element::FreeWord(_)) => {
                // Prefixes of the positive word.
                let word = self.as_generator_word(p);
                let mut letters = Vec::new();
                for (g, e) in word {
                    for _ in 0..e {
                        letters.push(g);
                    }
                }
                for k in 0..=letters.len() {
                    let mut w = self.identity();
                    for &g in &letters[..k] {
                        w = self.mul_unchecked(&w, &Element::FreeWord(vec![(g, 1)]));
                    }
                    out.insert(w);
                }
            }
            (Family::FreeAbelian { rank }, Element::AbelianVec(v)) => {
                let mut cur = vec![0i64; *rank];
                loop {
                    out.insert(Element::AbelianVec(cur.clone()));
                    let mut i = 0;
                    loop {
                        if i == *rank {
                            return;
                        }
                        if cur[i] < v[i] {
                            cur[i] += 1;
                            break;
                        }
                        cur[i] = 0;
                        i += 1;
                    }
                }
            }
            (Family::Bs12Ct, Element::Bs12 { a, n }) => {
                // x = (a', m) ≤ (a, n) iff 0 ≤ m ≤ n, 0 ≤ a' ≤ a and
                // a' ≡ a (mod 2^m).
                let b = a.num();
                for m in 0..=*n {
                    let step = 1i64 << m.min(62);
                    let mut av = b.rem_euclid(step);
                    while av <= b {
                        out.insert(Element::Bs12 {
                            a: Dyadic::from_int(av),
                            n: m,
                        });
                        av += step;
                    }
                }
            }
            (Family::Bs12Q, Element::Bs12 { a, n }) => {
                // The {t,ct}* interval is the chain (i mod 2^j, j), j ≤ n.
                let i = a.num();
                for j in 0..=*n {
                    let m = 1i64 << j.min(62);
                    out.insert(Element::Bs12 {
                        a: Dyadic::from_int(i.rem_euclid(m)),
                        n: j,
                    });
                }
            }
            (Family::Product(fa, fb), Element::Pair(l, r)) => {
                let mut ls = BTreeSet::new();
                let mut rs = BTreeSet::new();
                fa.interval_into(l, &mut ls);
                fb.interval_into(r, &mut rs);
                for a in &ls {
                    for b in &rs {
                        out.insert(Element::Pair(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
            }
            (Family::FreeProd(_, _), Element::AltWord(_)) => {
                for block in self.alt_interval_blocks(p).expect("positive checked") {
                    out.extend(block);
                }
            }
            (Family::Wreath(fa, fb), _) => {
                let fp = Cone::free_product((**fa).clone(), (**fb).clone());
                let d = self.wreath_decode(p).expect("positive checked");
                let mut inner = BTreeSet::new();
                fp.interval_into(&d, &mut inner);
                for q in inner {
                    out.insert(self.wreath_encode(&q).expect("interval members positive"));
                }
            }
            _ => unreachable!("positivity checked by caller"),
        }
    }

    /// All distinct elements of P expressible as words of length ≤ max_len in
    /// the cone generators, sorted canonically.
    pub fn enumerate_positive(&self, max_len: usize) -> Vec<Element> {
        let gens: Vec<Element> = self.p_generators().into_iter().map(|(_, g)| g).collect();
        let mut seen: BTreeSet<Element> = BTreeSet::new();
        let mut frontier = vec![self.identity()];
        seen.insert(self.identity());
        for _ in 0..max_len {
            let mut next = Vec::new();
            for x in &frontier {
                for g in &gens {
                    let y = self.mul_unchecked(x, g);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        seen.into_iter().collect()
    }

    /// Minimal number of positive generators needed to write p ∈ P.
    pub fn gen_length(&self, p: &Element) -> Result<u64> {
        if !self.is_positive(p) {
            return Err(Error::NotPositive(self.render(p)));
        }
        Ok(self.gen_length_unchecked(p))
    }

    fn gen_length_unchecked(&self, p: &Element) -> u64 {
        match (&self.family, p) {
            (Family::Free { .. }, Element::FreeWord(s)) => {
                s.iter().map(|&(_, e)| e.unsigned_abs()).sum()
            }
            (Family::FreeAbelian { .. }, Element::AbelianVec(v)) => {
                v.iter().map(|&x| x.unsigned_abs()).sum()
            }
            (Family::Bs12Ct, Element::Bs12 { a, n }) => {
                // t-count n plus the minimal c-count: greedy on coins 2^j,
                // j ≤ n, is optimal for powers of two.
                let av = a.num();
                let shift = (*n).min(62) as u32;
                let high = (av >> shift) as u64;
                let low = (av & ((1i64 << shift) - 1)) as u64;
                *n as u64 + high + low.count_ones() as u64
            }
            (Family::Bs12Q, Element::Bs12 { n, .. }) => *n as u64,
            (Family::Product(fa, fb), Element::Pair(l, r)) => {
                fa.gen_length_unchecked(l) + fb.gen_length_unchecked(r)
            }
            (Family::FreeProd(fa, fb), Element::AltWord(s)) => s
                .iter()
                .map(|(f, e)| {
                    if *f == 0 {
                        fa.gen_length_unchecked(e)
                    } else {
                        fb.gen_length_unchecked(e)
                    }
                })
                .sum(),
            (Family::Wreath(fa, fb), w) => {
                let fp = Cone::free_product((**fa).clone(), (**fb).clone());
                fp.gen_length_unchecked(&self.wreath_decode(w).expect("positive checked"))
            }
            _ => unreachable!("positivity checked by caller"),
        }
    }

    /// Express an arbitrary group element as a word in the group generators.
    pub fn as_generator_word(&self, g: &Element) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        self.gen_word_into(g, &mut out);
        // merge adjacent equal generators
        let mut merged: Vec<(usize, i64)> = Vec::new();
        for (i, e) in out {
            if e == 0 {
                continue;
            }
            match merged.last_mut() {
                Some((i0, e0)) if *i0 == i => {
                    *e0 += e;
                    if *e0 == 0 {
                        merged.pop();
                    }
                }
                _ => merged.push((i, e)),
            }
        }
        merged
    }

    fn gen_word_into(&self, g: &Element, out: &mut Vec<(usize, i64)>) {
        match (&self.family, g) {
            (Family::Free { .. }, Element::FreeWord(s)) => out.extend(s.iter().cloned()),
            (Family::FreeAbelian { .. }, Element::AbelianVec(v)) => {
                out.extend(v.iter().enumerate().map(|(i, &e)| (i, e)));
            }
            (Family::Bs12Ct | Family::Bs12Q, Element::Bs12 { a, n }) => {
                // (num/2^e, n) = t^{-e} c^{num} t^{e+n}; c is index 0, t is 1.
                let e = a.exp as i64;
                out.push((1, -e));
                out.push((0, a.num()));
                out.push((1, e + n));
            }
            (Family::Product(fa, fb), Element::Pair(l, r)) => {
                let offset = fa.g_generators().len();
                out.extend(fa.as_generator_word(l));
                out.extend(
                    fb.as_generator_word(r)
                        .into_iter()
                        .map(|(i, e)| (i + offset, e)),
                );
            }
            (Family::FreeProd(fa, fb), Element::AltWord(s)) => {
                let offset = fa.g_generators().len();
                for (f, e) in s {
                    if *f == 0 {
                        out.extend(fa.as_generator_word(e));
                    } else {
                        out.extend(
                            fb.as_generator_word(e)
                                .into_iter()
                                .map(|(i, x)| (i + offset, x)),
                        );
                    }
                }
            }
            (Family::Wreath(fa, fb), Element::WreathElem { support, shift }) => {
                let offset = fa.g_generators().len();
                let bword = |h: &Element| -> Vec<(usize, i64)> {
                    fb.as_generator_word(h)
                        .into_iter()
                        .map(|(i, e)| (i + offset, e))
                        .collect()
                };
                for (k, v) in support {
                    let kw = bword(k);
                    out.extend(kw.iter().cloned());
                    out.extend(fa.as_generator_word(v));
                    out.extend(kw.iter().rev().map(|&(i, e)| (i, -e)));
                }
                out.extend(bword(shift));
            }
            _ => panic!("element does not fit the family"),
        }
    }

    /// Canonical textual rendering of an element of this cone.
    pub fn render(&self, g: &Element) -> String {
        match (&self.family, g) {
            (Family::Free { gens }, Element::FreeWord(s)) => {
                if s.is_empty() {
                    return "e".to_string();
                }
                let mut parts = Vec::new();
                for &(i, e) in s {
                    let letter = &gens[i];
                    for _ in 0..e.unsigned_abs() {
                        if e > 0 {
                            parts.push(letter.clone());
                        } else {
                            parts.push(format!("{}^-1", letter));
                        }
                    }
                }
                parts.join(" ")
            }
            (Family::FreeAbelian { rank }, Element::AbelianVec(v)) => {
                if *rank == 1 {
                    format!("{}", v[0])
                } else {
                    format!(
                        "({})",
                        v.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                }
            }
            (Family::Bs12Ct | Family::Bs12Q, Element::Bs12 { a, n }) => {
                format!("({}, {})", a, n)
            }
            (Family::Product(fa, fb), Element::Pair(l, r)) => {
                format!("({} ; {})", fa.render(l), fb.render(r))
            }
            (Family::FreeProd(fa, fb), Element::AltWord(s)) => {
                if s.is_empty() {
                    return "[]".to_string();
                }
                let parts: Vec<String> = s
                    .iter()
                    .map(|(f, e)| {
                        let (factor, tag) = if *f == 0 { (fa, 1) } else { (fb, 2) };
                        format!("{}:{}", tag, factor.render_as_word(e))
                    })
                    .collect();
                format!("[{}]", parts.join(" | "))
            }
            (Family::Wreath(fa, fb), Element::WreathElem { support, shift }) => {
                let items: Vec<String> = support
                    .iter()
                    .map(|(k, v)| format!("{}:{}", fb.render(k), fa.render(v)))
                    .collect();
                format!("{{{}}}; {}", items.join(", "), fb.render(shift))
            }
            _ => format!("{:?}", g),
        }
    }

    /// Render as an expanded generator word (used inside free-product forms).
    fn render_as_word(&self, g: &Element) -> String {
        let gens = self.g_generators();
        let word = self.as_generator_word(g);
        if word.is_empty() {
            return "e".to_string();
        }
        let mut parts = Vec::new();
        for (i, e) in word {
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    parts.push(gens[i].0.clone());
                } else {
                    parts.push(format!("{}^-1", gens[i].0));
                }
            }
        }
        parts.join(" ")
    }

    /// The unique alternating decomposition p = p₁p₂…p_{2n} of a free-product
    /// positive: odd entries from factor 1, even from factor 2, interior
    /// entries nonidentity. Returned as the list [p₁, …, p_{2n}].
    pub fn alt_decompose(&self, p: &Element) -> Result<Vec<Element>> {
        let Family::FreeProd(fa, fb) = &self.family else {
            return Err(Error::FamilyMismatch(format!(
                "alt_decompose requires a free-product cone, got {}",
                self.name
            )));
        };
        if !self.is_positive(p) {
            return Err(Error::NotPositive(self.render(p)));
        }
        let Element::AltWord(s) = p else {
            unreachable!()
        };
        let mut padded = Vec::new();
        if let Some((first, _)) = s.first() {
            if *first == 1 {
                padded.push(fa.identity());
            }
        }
        for (_, e) in s {
            padded.push(e.clone());
        }
        if padded.len() % 2 == 1 {
            padded.push(fb.identity());
        }
        Ok(padded)
    }

    /// The interval decomposition [1,p] = ∪ X_i with
    /// X_i = p₁…p_{i−1}·[1,p_i]; blocks are returned in order i = 1..2n.
    pub fn alt_interval_blocks(&self, p: &Element) -> Result<Vec<Vec<Element>>> {
        let Family::FreeProd(fa, fb) = &self.family else {
            return Err(Error::FamilyMismatch(format!(
                "alt_interval_blocks requires a free-product cone, got {}",
                self.name
            )));
        };
        let parts = self.alt_decompose(p)?;
        let mut blocks = Vec::new();
        let mut prefix = self.identity();
        for (idx, part) in parts.iter().enumerate() {
            let (factor, side) = if idx % 2 == 0 { (fa, 0u8) } else { (fb, 1u8) };
            let inner = factor.interval(part)?;
            let block: Vec<Element> = inner
                .into_iter()
                .map(|s| self.mul_unchecked(&prefix, &self.embed(side, &s)))
                .collect();
            blocks.push(block);
            prefix = self.mul_unchecked(&prefix, &self.embed(side, part));
        }
        if blocks.is_empty() {
            blocks.push(vec![self.identity()]);
        }
        Ok(blocks)
    }

    /// Encode a free-product positive into the wreath cone: p ↦ (f, p_{≤2n})
    /// with f(p_{≤2i}) = p_{2i+1}.
    pub fn wreath_encode(&self, p: &Element) -> Result<Element> {
        let Family::Wreath(fa, fb) = &self.family else {
            return Err(Error::FamilyMismatch(format!(
                "wreath_encode requires a wreath cone, got {}",
                self.name
            )));
        };
        let fp = Cone::free_product((**fa).clone(), (**fb).clone());
        let parts = fp.alt_decompose(p)?;
        let mut support = BTreeMap::new();
        let mut prefix = fb.identity();
        let mut shift = fb.identity();
        for (idx, part) in parts.iter().enumerate() {
            if idx % 2 == 0 {
                if *part != fa.identity() {
                    support.insert(prefix.clone(), part.clone());
                }
            } else {
                prefix = fb.mul_unchecked(&prefix, part);
                shift = prefix.clone();
            }
        }
        Ok(Element::WreathElem {
            support: support.into_iter().collect(),
            shift: Box::new(shift),
        })
    }

    /// Decode a wreath element back to the free-product positive, or None
    /// when the element is not in P₁≀P₂ (support not a chain, negative
    /// pieces, or re-encoding mismatch).
    pub fn wreath_decode(&self, w: &Element) -> Option<Element> {
        let Family::Wreath(fa, fb) = &self.family else {
            return None;
        };
        let Element::WreathElem { support, shift } = w else {
            return None;
        };
        if !fb.element_fits(shift) {
            return None;
        }
        for (k, v) in support {
            if !fb.is_positive(k) || !fa.is_positive(v) {
                return None;
            }
        }
        if !fb.is_positive(shift) {
            return None;
        }
        // Sort the support keys into a chain under the H-order.
        let mut keys: Vec<&Element> = support.iter().map(|(k, _)| k).collect();
        keys.sort_by(|a, b| {
            if a == b {
                Ordering::Equal
            } else if fb.leq(a, b) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        });
        for pair in keys.windows(2) {
            if !fb.leq(pair[0], pair[1]) {
                return None;
            }
        }
        let lookup: BTreeMap<&Element, &Element> = support.iter().map(|(k, v)| (k, v)).collect();
        let mut chain: Vec<Element> = Vec::new();
        if keys.first().map(|k| **k != fb.identity()).unwrap_or(true) {
            chain.push(fb.identity());
        }
        chain.extend(keys.iter().map(|k| (*k).clone()));
        // Rebuild the padded alternating word.
        let mut padded: Vec<Element> = Vec::new();
        for (i, key) in chain.iter().enumerate() {
            let odd = lookup
                .get(key)
                .map(|v| (*v).clone())
                .unwrap_or_else(|| fa.identity());
            padded.push(odd);
            let next = if i + 1 < chain.len() {
                chain[i + 1].clone()
            } else {
                (**shift).clone()
            };
            let even = fb.mul_unchecked(&fb.inv_unchecked(key), &next);
            if !fb.is_positive(&even) {
                return None;
            }
            padded.push(even);
        }
        let fp = Cone::free_product((**fa).clone(), (**fb).clone());
        let mut candidate = fp.identity();
        for (i, part) in padded.iter().enumerate() {
            let side = (i % 2) as u8;
            candidate = fp.mul_unchecked(&candidate, &fp.embed(side, part));
        }
        if !fp.is_positive(&candidate) {
            return None;
        }
        match self.wreath_encode(&candidate) {
            Ok(enc) if enc == *w => Some(candidate),
            _ => None,
        }
    }

    /// Wreath codec entry point per the operation catalog.
    pub fn wreath_codec_encode(&self, p: &Element) -> Result<Element> {
        self.wreath_encode(p)
    }

    pub fn wreath_codec_decode(&self, w: &Element) -> Option<Element> {
        self.wreath_decode(w)
    }

    /// Factor a cone member into positive generators (indices into
    /// [`Cone::p_generators`]); any representing word, not necessarily
    /// minimal. Used when rendering degree words in graph files.
    pub fn as_positive_word(&self, p: &Element) -> Result<Vec<usize>> {
        if !self.is_positive(p) {
            return Err(Error::NotPositive(self.render(p)));
        }
        let mut out = Vec::new();
        self.positive_word_into(p, &mut out);
        Ok(out)
    }

    fn positive_word_into(&self, p: &Element, out: &mut Vec<usize>) {
        match (&self.family, p) {
            (Family::Free { .. }, Element::FreeWord(s)) => {
                for &(g, e) in s {
                    for _ in 0..e {
                        out.push(g);
                    }
                }
            }
            (Family::FreeAbelian { .. }, Element::AbelianVec(v)) => {
                for (i, &x) in v.iter().enumerate() {
                    for _ in 0..x {
                        out.push(i);
                    }
                }
            }
            (Family::Bs12Ct, Element::Bs12 { a, n }) => {
                // (a, n) = c^a t^n; generators are [c, t].
                for _ in 0..a.num() {
                    out.push(0);
                }
                for _ in 0..*n {
                    out.push(1);
                }
            }
            (Family::Bs12Q, Element::Bs12 { a, n }) => {
                // length-n word over [t, ct], first letter least significant.
                let i = a.num();
                for k in 0..*n {
                    if (i >> k) & 1 == 1 {
                        out.push(1);
                    } else {
                        out.push(0);
                    }
                }
            }
            (Family::Product(fa, fb), Element::Pair(l, r)) => {
                let offset = fa.p_generators().len();
                fa.positive_word_into(l, out);
                let mut rw = Vec::new();
                fb.positive_word_into(r, &mut rw);
                out.extend(rw.into_iter().map(|i| i + offset));
            }
            (Family::FreeProd(fa, fb), Element::AltWord(s)) => {
                let offset = fa.p_generators().len();
                for (f, e) in s {
                    if *f == 0 {
                        fa.positive_word_into(e, out);
                    } else {
                        let mut rw = Vec::new();
                        fb.positive_word_into(e, &mut rw);
                        out.extend(rw.into_iter().map(|i| i + offset));
                    }
                }
            }
            (Family::Wreath(fa, fb), w) => {
                let fp = Cone::free_product((**fa).clone(), (**fb).clone());
                let d = self.wreath_decode(w).expect("positivity checked");
                fp.positive_word_into(&d, out);
            }
            _ => unreachable!("positivity checked by caller"),
        }
    }

    /// The cone-spec string accepted by the file grammars.
    pub fn spec_string(&self) -> String {
        match &self.family {
            Family::Free { gens } => format!("free {}", gens.join(" ")),
            Family::FreeAbelian { rank } => format!("free_abelian {}", rank),
            Family::Bs12Ct => "bs12_ct".to_string(),
            Family::Bs12Q => "bs12_q".to_string(),
            Family::Product(a, b) => {
                format!("product({}, {})", a.spec_string(), b.spec_string())
            }
            Family::FreeProd(a, b) => {
                format!("freeprod({}, {})", a.spec_string(), b.spec_string())
            }
            Family::Wreath(a, b) => {
                format!("wreath({}, {})", a.spec_string(), b.spec_string())
            }
        }
    }
}
