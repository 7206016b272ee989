//! Hall numbers, the twisted Hall product, the coproduct and its twisted
//! tensor square, and the dual algebra of class functions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::coeff::{Rational, SqrtQNumber};
use crate::error::{HallError, Result};
use crate::quiver::{DimVector, FreeRep, Quiver, RepCategory};
use crate::ring::{Ring, RingParams};

/// How the Euler form enters the product: `v^(n<a,b>)` (`Half`) or
/// `q^(n<a,b>)` (`Integer`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Twist {
    #[default]
    Half,
    Integer,
}

impl FromStr for Twist {
    type Err = HallError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(Twist::Half),
            "integer" => Ok(Twist::Integer),
            _ => Err(HallError::Parse(format!("unknown twist `{s}` (expected half or integer)"))),
        }
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(match self {
            Twist::Half => "half",
            Twist::Integer => "integer",
        })
    }
}

/// A finite linear combination of isomorphism classes with coefficients in
/// `Q[v]/(v^2 - q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallElement {
    params: RingParams,
    quiver: Quiver,
    terms: BTreeMap<FreeRep, SqrtQNumber>,
}

impl HallElement {
    pub fn zero(params: RingParams, quiver: Quiver) -> Self {
        HallElement { params, quiver, terms: BTreeMap::new() }
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn terms(&self) -> &BTreeMap<FreeRep, SqrtQNumber> {
        &self.terms
    }

    pub fn coeff(&self, x: &FreeRep) -> SqrtQNumber {
        self.terms.get(x).cloned().unwrap_or_else(|| SqrtQNumber::zero(self.params.q))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * x`; `x` is assumed to be in canonical form.
    pub fn add_term(&mut self, x: FreeRep, c: &SqrtQNumber) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x.clone()).or_insert_with(|| SqrtQNumber::zero(c.q));
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&x);
        }
    }

    fn same_ambient(&self, other: &HallElement) -> Result<()> {
        if self.params != other.params || self.quiver != other.quiver {
            return Err(HallError::ParamMismatch(format!(
                "elements over {} and {} or different quivers",
                self.params, other.params
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &HallElement) -> Result<HallElement> {
        self.same_ambient(other)?;
        let mut out = self.clone();
        for (x, c) in &other.terms {
            out.add_term(x.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HallElement) -> Result<HallElement> {
        self.add(&other.scale(&SqrtQNumber::from_int(self.params.q, -1)))
    }

    pub fn scale(&self, c: &SqrtQNumber) -> HallElement {
        let mut out = HallElement::zero(self.params, self.quiver.clone());
        for (x, d) in &self.terms {
            out.add_term(x.clone(), &(d * c));
        }
        out
    }

    /// Distinct dimension vectors of the support.
    pub fn grades(&self) -> BTreeSet<DimVector> {
        self.terms.keys().map(|x| x.dim.clone()).collect()
    }
}

/// A linear combination of pairs `M (x) N` of isomorphism classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    params: RingParams,
    quiver: Quiver,
    terms: BTreeMap<(FreeRep, FreeRep), SqrtQNumber>,
}

impl TensorElement {
    pub fn zero(params: RingParams, quiver: Quiver) -> Self {
        TensorElement { params, quiver, terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<(FreeRep, FreeRep), SqrtQNumber> {
        &self.terms
    }

    pub fn support(&self) -> BTreeSet<(FreeRep, FreeRep)> {
        self.terms.keys().cloned().collect()
    }

    pub fn coeff(&self, m: &FreeRep, n: &FreeRep) -> SqrtQNumber {
        self.terms
            .get(&(m.clone(), n.clone()))
            .cloned()
            .unwrap_or_else(|| SqrtQNumber::zero(self.params.q))
    }

    pub fn add_term(&mut self, key: (FreeRep, FreeRep), c: &SqrtQNumber) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(|| SqrtQNumber::zero(c.q));
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn same_ambient(&self, other: &TensorElement) -> Result<()> {
        if self.params != other.params || self.quiver != other.quiver {
            return Err(HallError::ParamMismatch("tensor elements over different ambients".into()));
        }
        Ok(())
    }
}

/// A class function on one grade: `E -> f(E)` over canonical forms of
/// dimension `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFunction {
    pub dim: DimVector,
    pub values: BTreeMap<FreeRep, SqrtQNumber>,
}

impl DualFunction {
    pub fn value(&self, e: &FreeRep, q: u32) -> SqrtQNumber {
        self.values.get(e).cloned().unwrap_or_else(|| SqrtQNumber::zero(q))
    }
}

/// Outcome of comparing `Delta(a b)` with `Delta(a) Delta(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaReport {
    pub homomorphism: bool,
    pub lhs_support: BTreeSet<(FreeRep, FreeRep)>,
    pub rhs_support: BTreeSet<(FreeRep, FreeRep)>,
    /// Keys in `Delta(a b)` but not in `Delta(a) Delta(b)`.
    pub lhs_only: BTreeSet<(FreeRep, FreeRep)>,
    pub rhs_only: BTreeSet<(FreeRep, FreeRep)>,
    /// Keys present on both sides with different coefficients.
    pub coefficient_mismatches: BTreeSet<(FreeRep, FreeRep)>,
    pub lhs: TensorElement,
    pub rhs: TensorElement,
}

type SectionCounts = BTreeMap<(FreeRep, FreeRep), u128>;
/// Classes of `X ∘ Y` with their Hall numbers.
type CircTerms = Vec<(FreeRep, u128)>;

/// The Hall algebra of free representations at fixed `(q, n)`, with memo
/// tables for iso classes, automorphism counts and subobject statistics.
#[derive(Debug)]
pub struct HallAlgebra {
    cat: RepCategory,
    twist: Twist,
    classes: Mutex<HashMap<DimVector, Arc<Vec<FreeRep>>>>,
    auts: Mutex<HashMap<FreeRep, u128>>,
    sections: Mutex<HashMap<(FreeRep, DimVector), Arc<SectionCounts>>>,
    circ: Mutex<HashMap<(FreeRep, FreeRep), Arc<CircTerms>>>,
}

impl HallAlgebra {
    pub fn new(cat: RepCategory, twist: Twist) -> Self {
        HallAlgebra {
            cat,
            twist,
            classes: Mutex::default(),
            auts: Mutex::default(),
            sections: Mutex::default(),
            circ: Mutex::default(),
        }
    }

    pub fn with(q: u32, n: u32, quiver: Quiver, twist: Twist, budget: u64) -> Result<Self> {
        Ok(HallAlgebra::new(RepCategory::new(Ring::with(q, n)?, quiver, budget), twist))
    }

    pub fn category(&self) -> &RepCategory {
        &self.cat
    }

    pub fn params(&self) -> RingParams {
        self.cat.ring().params()
    }

    pub fn q(&self) -> u32 {
        self.cat.ring().q()
    }

    pub fn n(&self) -> u32 {
        self.cat.ring().n()
    }

    pub fn quiver(&self) -> &Quiver {
        self.cat.quiver()
    }

    pub fn twist(&self) -> Twist {
        self.twist
    }

    pub fn iso_classes(&self, dim: &DimVector) -> Result<Arc<Vec<FreeRep>>> {
        if let Some(c) = self.classes.lock().unwrap().get(dim) {
            return Ok(c.clone());
        }
        let list = Arc::new(self.cat.iso_classes(dim)?);
        self.classes.lock().unwrap().insert(dim.clone(), list.clone());
        Ok(list)
    }

    /// `a_X = |Aut(X)|` for canonical `x`.
    pub fn aut(&self, x: &FreeRep) -> Result<u128> {
        if let Some(&a) = self.auts.lock().unwrap().get(x) {
            return Ok(a);
        }
        let a = self.cat.aut_count(x)?;
        self.auts.lock().unwrap().insert(x.clone(), a);
        Ok(a)
    }

    /// Number of free subobjects of rank `w` in canonical `l`, keyed by
    /// `(quotient, sub)`.
    pub fn section_counts(&self, l: &FreeRep, w: &DimVector) -> Result<Arc<SectionCounts>> {
        let key = (l.clone(), w.clone());
        if let Some(s) = self.sections.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let mut counts = SectionCounts::new();
        for s in self.cat.free_subreps(l, w)? {
            *counts.entry((s.quot, s.sub)).or_insert(0) += 1;
        }
        let counts = Arc::new(counts);
        self.sections.lock().unwrap().insert(key, counts.clone());
        Ok(counts)
    }

    /// `F^L_{XY}`: subobjects of `L` isomorphic to `Y` with quotient isomorphic to `X`.
    pub fn hall_number(&self, l: &FreeRep, x: &FreeRep, y: &FreeRep) -> Result<u128> {
        if x.dim.add(&y.dim) != l.dim {
            return Ok(0);
        }
        let l = self.cat.canonical_form(l)?;
        let x = self.cat.canonical_form(x)?;
        let y = self.cat.canonical_form(y)?;
        let counts = self.section_counts(&l, &y.dim)?;
        Ok(counts.get(&(x, y)).copied().unwrap_or(0))
    }

    /// Hall number from a direct count of conflations, `|W^L_{XY}| / (a_X a_Y)`.
    pub fn hall_number_by_conflations(&self, l: &FreeRep, x: &FreeRep, y: &FreeRep) -> Result<Rational> {
        let w = self.cat.conflation_count(l, x, y)?;
        let ax = self.cat.aut_count(x)?;
        let ay = self.cat.aut_count(y)?;
        Ok(BigRational::new(BigInt::from(w), BigInt::from(ax * ay)))
    }

    /// Exponent of `v` attached to the pair of grades `(a, b)`.
    pub fn twist_exponent(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        let e = self.n() as i64 * self.cat.euler_form(a, b)?;
        Ok(match self.twist {
            Twist::Half => e,
            Twist::Integer => 2 * e,
        })
    }

    pub fn v_pow(&self, k: i64) -> SqrtQNumber {
        SqrtQNumber::v_pow(self.q(), k)
    }

    pub fn zero(&self) -> HallElement {
        HallElement::zero(self.params(), self.quiver().clone())
    }

    pub fn unit(&self) -> HallElement {
        let mut u = self.zero();
        u.add_term(self.cat.zero_rep(), &SqrtQNumber::one(self.q()));
        u
    }

    /// The basis element of the class of `x`.
    pub fn basis(&self, x: &FreeRep) -> Result<HallElement> {
        let mut e = self.zero();
        e.add_term(self.cat.canonical_form(x)?, &SqrtQNumber::one(self.q()));
        Ok(e)
    }

    pub fn simple(&self, label: &str) -> Result<HallElement> {
        self.basis(&self.cat.simple(label)?)
    }

    fn check(&self, a: &HallElement) -> Result<()> {
        if a.params != self.params() || &a.quiver != self.quiver() {
            return Err(HallError::ParamMismatch(format!(
                "element over {} used in algebra over {}",
                a.params,
                self.params()
            )));
        }
        Ok(())
    }

    fn circ_terms(&self, x: &FreeRep, y: &FreeRep) -> Result<Arc<CircTerms>> {
        let key = (x.clone(), y.clone());
        if let Some(c) = self.circ.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let dim = x.dim.add(&y.dim);
        let mut out = Vec::new();
        for l in self.iso_classes(&dim)?.iter() {
            let f = self.section_counts(l, &y.dim)?.get(&key).copied().unwrap_or(0);
            if f > 0 {
                out.push((l.clone(), f));
            }
        }
        let out = Arc::new(out);
        self.circ.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// `X o Y = sum_L F^L_{XY} L`.
    pub fn circ_product(&self, x: &FreeRep, y: &FreeRep) -> Result<HallElement> {
        let x = self.cat.canonical_form(x)?;
        let y = self.cat.canonical_form(y)?;
        let mut out = self.zero();
        for (l, f) in self.circ_terms(&x, &y)?.iter() {
            out.add_term(l.clone(), &SqrtQNumber::from_int(self.q(), *f as i64));
        }
        Ok(out)
    }

    /// Bilinear extension of `X . Y = v^(twist(|X|,|Y|)) X o Y`.
    pub fn twisted_product(&self, a: &HallElement, b: &HallElement) -> Result<HallElement> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        for (x, cx) in &a.terms {
            for (y, cy) in &b.terms {
                let c = &(cx * cy) * &self.v_pow(self.twist_exponent(&x.dim, &y.dim)?);
                for (l, f) in self.circ_terms(x, y)?.iter() {
                    out.add_term(l.clone(), &c.scale(&BigRational::from_integer(BigInt::from(*f))));
                }
            }
        }
        Ok(out)
    }

    /// `S_{i_1} ... S_{i_m}` for a word of vertex indices.
    pub fn word_product(&self, word: &[usize]) -> Result<HallElement> {
        let mut acc = self.unit();
        for &i in word {
            if i >= self.quiver().vertex_count() {
                return Err(HallError::UnknownVertex(i.to_string()));
            }
            let s = self.basis(&self.cat.simple_at(i))?;
            acc = self.twisted_product(&acc, &s)?;
        }
        Ok(acc)
    }

    /// Word products spanning the composition subalgebra in the given grades.
    pub fn composition_span(&self, words: &[Vec<usize>]) -> Result<Vec<HallElement>> {
        words.iter().map(|w| self.word_product(w)).collect()
    }

    pub fn zero_tensor(&self) -> TensorElement {
        TensorElement::zero(self.params(), self.quiver().clone())
    }

    /// `Delta(E) = sum v^(twist(|M|,|N|)) F^E_{MN} a_M a_N / a_E  M (x) N`.
    pub fn delta(&self, e: &FreeRep) -> Result<TensorElement> {
        let e = self.cat.canonical_form(e)?;
        let ae = self.aut(&e)?;
        let mut out = self.zero_tensor();
        for w in e.dim.sub_vectors() {
            for ((m, n), f) in self.section_counts(&e, &w)?.iter() {
                let ratio = BigRational::new(
                    BigInt::from(*f) * BigInt::from(self.aut(m)?) * BigInt::from(self.aut(n)?),
                    BigInt::from(ae),
                );
                let c = self.v_pow(self.twist_exponent(&m.dim, &n.dim)?).scale(&ratio);
                out.add_term((m.clone(), n.clone()), &c);
            }
        }
        Ok(out)
    }

    pub fn delta_element(&self, a: &HallElement) -> Result<TensorElement> {
        self.check(a)?;
        let mut out = self.zero_tensor();
        for (x, c) in &a.terms {
            for (key, d) in &self.delta(x)?.terms {
                out.add_term(key.clone(), &(c * d));
            }
        }
        Ok(out)
    }

    /// `(A (x) B)(C (x) D) = v^(twist(|B|,|C|) + twist(|C|,|B|)) AC (x) BD`.
    pub fn tensor_product(&self, u: &TensorElement, w: &TensorElement) -> Result<TensorElement> {
        u.same_ambient(w)?;
        if u.params != self.params() || &u.quiver != self.quiver() {
            return Err(HallError::ParamMismatch("tensor element from another algebra".into()));
        }
        let mut out = self.zero_tensor();
        for ((a, b), cu) in &u.terms {
            for ((c, d), cw) in &w.terms {
                let k = self.twist_exponent(&b.dim, &c.dim)? + self.twist_exponent(&c.dim, &b.dim)?;
                let coef = &(cu * cw) * &self.v_pow(k);
                let ac = self.twisted_product(&self.basis(a)?, &self.basis(c)?)?;
                let bd = self.twisted_product(&self.basis(b)?, &self.basis(d)?)?;
                for (x, cx) in &ac.terms {
                    for (y, cy) in &bd.terms {
                        out.add_term((x.clone(), y.clone()), &(&coef * &(cx * cy)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Compares `Delta(M N)` with `Delta(M) Delta(N)`.
    pub fn check_delta_homomorphism(&self, m: &FreeRep, n: &FreeRep) -> Result<DeltaReport> {
        self.check_delta_homomorphism_elements(&self.basis(m)?, &self.basis(n)?)
    }

    pub fn check_delta_homomorphism_elements(&self, a: &HallElement, b: &HallElement) -> Result<DeltaReport> {
        let lhs = self.delta_element(&self.twisted_product(a, b)?)?;
        let rhs = self.tensor_product(&self.delta_element(a)?, &self.delta_element(b)?)?;
        let lhs_support = lhs.support();
        let rhs_support = rhs.support();
        let lhs_only: BTreeSet<_> = lhs_support.difference(&rhs_support).cloned().collect();
        let rhs_only: BTreeSet<_> = rhs_support.difference(&lhs_support).cloned().collect();
        let coefficient_mismatches: BTreeSet<_> = lhs_support
            .intersection(&rhs_support)
            .filter(|(m, n)| lhs.coeff(m, n) != rhs.coeff(m, n))
            .cloned()
            .collect();
        Ok(DeltaReport {
            homomorphism: lhs == rhs,
            lhs_support,
            rhs_support,
            lhs_only,
            rhs_only,
            coefficient_mismatches,
            lhs,
            rhs,
        })
    }

    /// The characteristic function `delta_X` of the class of `x`.
    pub fn char_function(&self, x: &FreeRep) -> Result<DualFunction> {
        let x = self.cat.canonical_form(x)?;
        let mut values = BTreeMap::new();
        values.insert(x.clone(), SqrtQNumber::one(self.q()));
        Ok(DualFunction { dim: x.dim, values })
    }

    /// `(f1 . f2)(E) = sum_{N in E} f1(E/N) f2(N)`, evaluated on every class of
    /// the combined grade by direct enumeration of subobjects.
    pub fn dual_product(&self, f1: &DualFunction, f2: &DualFunction) -> Result<DualFunction> {
        let dim = f1.dim.add(&f2.dim);
        let q = self.q();
        let mut values = BTreeMap::new();
        for e in self.iso_classes(&dim)?.iter() {
            let mut acc = SqrtQNumber::zero(q);
            for s in self.cat.free_subreps(e, &f2.dim)? {
                acc = &acc + &(&f1.value(&s.quot, q) * &f2.value(&s.sub, q));
            }
            if !acc.is_zero() {
                values.insert(e.clone(), acc);
            }
        }
        Ok(DualFunction { dim, values })
    }
}

/// Coefficients of a word product as Laurent polynomials in `v`, recovered
/// from its values at each prime. Terms are matched across primes by grade and
/// rendered representative; the known power of `v` from the twist is divided
/// out before interpolating in `q` with degree bound `primes.len() - 2`.
pub fn interpolate_word(
    quiver: &Quiver,
    n: u32,
    primes: &[u32],
    twist: Twist,
    budget: u64,
    word: &[usize],
) -> Result<BTreeMap<(DimVector, String), crate::coeff::LaurentPoly>> {
    if primes.len() < 2 {
        return Err(HallError::Interpolation("need at least two primes".into()));
    }
    let mut samples: BTreeMap<(DimVector, String), Vec<(u32, SqrtQNumber)>> = BTreeMap::new();
    let mut shift = 0;
    for (k, &q) in primes.iter().enumerate() {
        let alg = HallAlgebra::with(q, n, quiver.clone(), twist, budget)?;
        shift = 0;
        for a in 0..word.len() {
            for b in a + 1..word.len() {
                let (x, y) = (alg.category().simple_at(word[a]).dim, alg.category().simple_at(word[b]).dim);
                shift += alg.twist_exponent(&x, &y)?;
            }
        }
        let unshift = alg.v_pow(-shift);
        for (x, c) in alg.word_product(word)?.terms() {
            let key = (x.dim.clone(), alg.category().format_rep(x));
            let entry = samples.entry(key).or_default();
            // classes absent at earlier primes had coefficient zero there
            for &p in &primes[entry.len()..k] {
                entry.push((p, SqrtQNumber::zero(p)));
            }
            entry.push((q, c * &unshift));
        }
        for entry in samples.values_mut() {
            if entry.len() == k {
                entry.push((q, SqrtQNumber::zero(q)));
            }
        }
    }
    let mut out = BTreeMap::new();
    for (key, pts) in samples {
        let p = crate::coeff::interpolate_in_q(&pts, crate::coeff::Parity::Even, primes.len() - 2)
            .map_err(|e| match e {
                HallError::Interpolation(m) => HallError::Interpolation(format!("{} {}: {m}", key.0, key.1)),
                other => other,
            })?;
        out.insert(key, p.shift(shift));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::error::DEFAULT_BUDGET;
    use crate::ring::RMatrix;

    fn alg(q: u32, n: u32, preset: &str) -> HallAlgebra {
        HallAlgebra::with(q, n, Quiver::preset(preset).unwrap(), Twist::Half, DEFAULT_BUDGET).unwrap()
    }

    fn a2_map(h: &HallAlgebra, dim: [u32; 2], rows: &[Vec<Vec<u32>>]) -> FreeRep {
        let c = h.category();
        let m = if rows.is_empty() {
            RMatrix::zero(dim[1] as usize, dim[0] as usize)
        } else {
            c.ring().mat_from_coeffs(rows).unwrap()
        };
        c.canonical_form(&c.rep(DimVector(dim.to_vec()), vec![m]).unwrap()).unwrap()
    }

    #[test]
    fn hall_number_examples() {
        let h = alg(2, 2, "a2");
        let c = h.category();
        let s1 = c.simple("1").unwrap();
        let s2 = c.simple("2").unwrap();
        let l = c.zero_at(&DimVector(vec![2, 0]));
        assert_eq!(h.hall_number(&l, &s1, &s1).unwrap(), 6);
        let zero_map = a2_map(&h, [1, 1], &[]);
        assert_eq!(h.hall_number(&zero_map, &s2, &s1).unwrap(), 1);
        assert_eq!(h.hall_number(&zero_map, &zero_map, &c.zero_rep()).unwrap(), 1);
        assert_eq!(h.hall_number(&zero_map, &s1, &s1).unwrap(), 0);
    }

    #[test]
    fn circ_product_examples() {
        let h = alg(2, 2, "a2");
        let c = h.category();
        let s1 = c.simple("1").unwrap();
        let s2 = c.simple("2").unwrap();
        let p = h.circ_product(&s1, &s2).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.terms().values().all(|x| *x == SqrtQNumber::one(2)));
        let p = h.circ_product(&s2, &s1).unwrap();
        assert_eq!(p, h.basis(&a2_map(&h, [1, 1], &[])).unwrap());
        assert_eq!(h.circ_product(&s1, &c.zero_rep()).unwrap(), h.basis(&s1).unwrap());
    }

    #[test]
    fn twisted_product_examples() {
        let h = alg(2, 2, "a2");
        let s1 = h.simple("1").unwrap();
        let s2 = h.simple("2").unwrap();
        let sq = h.twisted_product(&s1, &s1).unwrap();
        assert_eq!(sq.terms().values().next().unwrap(), &SqrtQNumber::from_int(2, 12));
        let p = h.twisted_product(&s2, &s1).unwrap();
        assert_eq!(p, h.basis(&a2_map(&h, [1, 1], &[])).unwrap());
        assert_eq!(h.twisted_product(&h.unit(), &s1).unwrap(), s1);
        let w = h.word_product(&[0, 1]).unwrap();
        assert!(w.terms().values().all(|x| *x == SqrtQNumber::from_rational(2, BigRational::new(1.into(), 2.into()))));
        assert_eq!(h.word_product(&[]).unwrap(), h.unit());
    }

    #[test]
    fn integer_twist_squares_the_factor() {
        let h = HallAlgebra::with(2, 2, Quiver::preset("a2").unwrap(), Twist::Integer, DEFAULT_BUDGET).unwrap();
        let s1 = h.simple("1").unwrap();
        let sq = h.twisted_product(&s1, &s1).unwrap();
        assert_eq!(sq.terms().values().next().unwrap(), &SqrtQNumber::from_int(2, 24));
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let h = alg(2, 2, "a2");
        let other = alg(3, 2, "a2");
        let s = other.simple("1").unwrap();
        assert!(matches!(h.twisted_product(&s, &s), Err(HallError::ParamMismatch(_))));
        assert!(h.unit().add(&other.unit()).is_err());
    }

    #[test]
    fn delta_examples() {
        let h = alg(2, 2, "a2");
        let c = h.category();
        let s1 = c.simple("1").unwrap();
        let z = c.zero_rep();
        let d = h.delta(&s1).unwrap();
        assert_eq!(d.support(), BTreeSet::from([(s1.clone(), z.clone()), (z.clone(), s1.clone())]));
        assert_eq!(d.coeff(&s1, &z), SqrtQNumber::one(2));

        let e = a2_map(&h, [1, 1], &[]);
        let s2 = c.simple("2").unwrap();
        let d = h.delta(&e).unwrap();
        // a_{S_1} a_{S_2} / a_E = 2 * 2 / 4, twist v^(n<(0,1),(1,0)>) = 1
        assert_eq!(d.coeff(&s2, &s1), SqrtQNumber::one(2));
        // the zero map splits, so S_2 is also a subobject, with twist v^(n<(1,0),(0,1)>) = v^-2
        assert_eq!(d.coeff(&s1, &s2), SqrtQNumber::v_pow(2, -2));
    }

    #[test]
    fn tensor_product_examples() {
        let h = alg(2, 2, "a2");
        let c = h.category();
        let s1 = c.simple("1").unwrap();
        let s2 = c.simple("2").unwrap();
        let z = c.zero_rep();
        let one = SqrtQNumber::one(2);
        let mk = |a: &FreeRep, b: &FreeRep| {
            let mut t = h.zero_tensor();
            t.add_term((a.clone(), b.clone()), &one);
            t
        };
        let p = h.tensor_product(&mk(&s1, &z), &mk(&z, &s1)).unwrap();
        assert_eq!(p, mk(&s1, &s1));
        let p = h.tensor_product(&mk(&z, &s1), &mk(&s2, &z)).unwrap();
        assert_eq!(p.coeff(&s2, &s1), SqrtQNumber::v_pow(2, -2));
        let u = h.delta(&a2_map(&h, [1, 1], &[vec![vec![0, 1]]])).unwrap();
        assert_eq!(h.tensor_product(&u, &mk(&z, &z)).unwrap(), u);
    }

    #[test]
    fn delta_counterexample_at_n3() {
        let h = alg(2, 3, "a2");
        let m = a2_map(&h, [1, 1], &[vec![vec![0, 1]]]);
        let report = h.check_delta_homomorphism(&m, &m).unwrap();
        assert!(!report.homomorphism);
        let witness = (a2_map(&h, [1, 1], &[vec![vec![1]]]), a2_map(&h, [1, 1], &[vec![vec![0, 0, 1]]]));
        assert!(report.lhs_only.contains(&witness));
    }

    #[test]
    fn delta_is_multiplicative_at_n1() {
        let h = alg(2, 1, "a2");
        let m = a2_map(&h, [1, 1], &[]);
        let report = h.check_delta_homomorphism(&m, &m).unwrap();
        assert!(report.homomorphism, "{:?}", report.coefficient_mismatches);
        let z = h.category().zero_rep();
        assert!(alg(2, 2, "a2").check_delta_homomorphism(&z, &m).unwrap().homomorphism);
    }

    #[test]
    fn dual_product_examples() {
        let h = alg(2, 2, "a2");
        let c = h.category();
        let d1 = h.char_function(&c.simple("1").unwrap()).unwrap();
        let d2 = h.char_function(&c.simple("2").unwrap()).unwrap();
        let t = a2_map(&h, [1, 1], &[vec![vec![0, 1]]]);
        let one = a2_map(&h, [1, 1], &[vec![vec![1]]]);
        assert_eq!(h.dual_product(&d1, &d2).unwrap().value(&t, 2), SqrtQNumber::one(2));
        assert!(h.dual_product(&d2, &d1).unwrap().value(&one, 2).is_zero());
        let d0 = h.char_function(&c.zero_rep()).unwrap();
        assert_eq!(h.dual_product(&d0, &d1).unwrap(), d1);
    }

    #[test]
    fn conflation_count_agrees_on_small_case() {
        let h = alg(2, 2, "a2");
        let c = h.category();
        let s1 = c.simple("1").unwrap();
        let l = c.zero_at(&DimVector(vec![2, 0]));
        assert_eq!(h.hall_number_by_conflations(&l, &s1, &s1).unwrap(), rat(6));
    }

    #[test]
    fn interpolation_of_square() {
        let q = Quiver::preset("a2").unwrap();
        let got = interpolate_word(&q, 2, &[2, 3, 5, 7], Twist::Half, DEFAULT_BUDGET, &[0, 0]).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got.values().next().unwrap().to_string(), "v^6 + v^4");
        let got = interpolate_word(&q, 2, &[2, 3, 5, 7], Twist::Half, DEFAULT_BUDGET, &[0, 1]).unwrap();
        assert!(got.values().all(|p| p.to_string() == "v^-2"));
    }
}
