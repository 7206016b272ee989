//! The acceptance suite, shared by the `acceptance` test target and the
//! `accept` subcommand.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeff::LaurentPoly;
use crate::error::Result;
use crate::flag::{self, FlagType};
use crate::gkm;
use crate::hall::{interpolate_word, HallAlgebra, HallElement, Twist};
use crate::quiver::{DimVector, FreeRep, Quiver};
use crate::ring::RMatrix;

/// The `(q, n)` pairs exercised by most criteria.
pub const PARAM_PAIRS: [(u32, u32); 4] = [(2, 1), (2, 2), (3, 2), (2, 3)];

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {} {} ({})",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "A2 word products match closed forms"),
    (2, "closed forms recovered by interpolation over primes"),
    (3, "coproduct fails to be multiplicative for n = 3"),
    (4, "n = 1: multiplicative coproduct and Serre relation"),
    (5, "n >= 2: Serre residual is nonzero"),
    (6, "associativity and unit"),
    (7, "free action: conflation count matches Hall number"),
    (8, "flag dimension identities and Grassmannian counts"),
    (9, "commuting generators on the arrowless quiver"),
    (10, "dual product reproduces Hall numbers"),
];

pub fn run_all(budget: u64, seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run(id, budget, seed)).collect()
}

pub fn run(id: u32, budget: u64, seed: u64) -> CriterionResult {
    let name = CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown criterion");
    let start = Instant::now();
    let outcome = match id {
        1 => criterion_1(budget),
        2 => criterion_2(budget),
        3 => criterion_3(budget),
        4 => criterion_4(budget),
        5 => criterion_5(budget),
        6 => criterion_6(budget),
        7 => criterion_7(budget),
        8 => criterion_8(budget, seed),
        9 => criterion_9(budget),
        10 => criterion_10(budget),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    let limit = match id {
        1 => Some(60.0),
        8 => Some(5.0),
        _ => None,
    };
    if let Some(limit) = limit {
        if elapsed.as_secs_f64() >= limit {
            passed = false;
            detail.push_str(&format!("; exceeded {limit} s"));
        }
    }
    CriterionResult { id, name, passed, detail, elapsed }
}

fn a2() -> Quiver {
    Quiver::preset("a2").unwrap()
}

fn algebra(q: u32, n: u32, quiver: Quiver, twist: Twist, budget: u64) -> Result<HallAlgebra> {
    HallAlgebra::with(q, n, quiver, twist, budget)
}

/// Representatives appearing in the closed forms on `A_2`, described
/// independently of `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// `R^2 -> 0`
    Square,
    /// `R -> R` by `t^a`, or the zero map.
    Line(Option<u32>),
    /// `R^2 -> R` by `(t^a, 0)`, or the zero map.
    Wedge(Option<u32>),
}

fn shape_rep(h: &HallAlgebra, s: Shape) -> FreeRep {
    let cat = h.category();
    let ring = cat.ring();
    let map = |rows, cols, a: Option<u32>| {
        let mut m = RMatrix::zero(rows, cols);
        if let Some(a) = a {
            m.set(0, 0, ring.t_pow(a));
        }
        m
    };
    match s {
        Shape::Square => cat.zero_at(&DimVector(vec![2, 0])),
        Shape::Line(a) => FreeRep { dim: DimVector(vec![1, 1]), maps: vec![map(1, 1, a)] },
        Shape::Wedge(a) => FreeRep { dim: DimVector(vec![2, 1]), maps: vec![map(1, 2, a)] },
    }
}

fn poly(s: &str) -> LaurentPoly {
    s.parse().expect("well-formed literal")
}

/// A word and its expected expansion.
type ClosedForm = (Vec<usize>, Vec<(Shape, LaurentPoly)>);

/// The six products of simples on `A_2`, as Laurent polynomials in `v`.
fn closed_forms(n: u32) -> Vec<ClosedForm> {
    let n = n as i64;
    // q^n + q^(n-1)
    let g = &LaurentPoly::q_pow(n) + &LaurentPoly::q_pow(n - 1);
    let v = |k: i64| LaurentPoly::monomial(crate::coeff::rat(1), k);
    let lines = |c: &LaurentPoly| {
        let mut t: Vec<_> = (0..n as u32).map(|a| (Shape::Line(Some(a)), c.clone())).collect();
        t.push((Shape::Line(None), c.clone()));
        t
    };
    let wedges = |f: &dyn Fn(u32) -> LaurentPoly, zero: LaurentPoly| {
        let mut t: Vec<_> = (0..n as u32).map(|a| (Shape::Wedge(Some(a)), f(a))).collect();
        t.push((Shape::Wedge(None), zero));
        t
    };
    vec![
        (vec![0, 0], vec![(Shape::Square, &v(n) * &g)]),
        (vec![0, 1], lines(&v(-n))),
        (vec![1, 0], vec![(Shape::Line(None), poly("1"))]),
        (vec![0, 0, 1], wedges(&|_| &v(-n) * &g, &v(-n) * &g)),
        (vec![0, 1, 0], wedges(&|a| LaurentPoly::q_pow(a as i64), g.clone())),
        (vec![1, 0, 0], vec![(Shape::Wedge(None), &v(n) * &g)]),
    ]
}

fn word_name(w: &[usize]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|i| format!("S{}", i + 1)).collect::<Vec<_>>().join("")
}

fn criterion_1(budget: u64) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (q, n) in PARAM_PAIRS {
        let h = algebra(q, n, a2(), Twist::Half, budget)?;
        for (word, terms) in closed_forms(n) {
            let mut expected = h.zero();
            for (shape, c) in terms {
                let rep = h.category().canonical_form(&shape_rep(&h, shape))?;
                expected.add_term(rep, &c.eval_at_prime(q)?);
            }
            checked += 1;
            if h.word_product(&word)? != expected {
                failures.push(format!("{} at q={q},n={n}", word_name(&word)));
            }
        }
    }
    Ok(report(failures, format!("{checked} products")))
}

fn report(failures: Vec<String>, ok: String) -> (bool, String) {
    if failures.is_empty() {
        (true, ok)
    } else {
        (false, format!("mismatch: {}", failures.join(", ")))
    }
}

fn criterion_2(budget: u64) -> Result<(bool, String)> {
    let n = 2;
    let primes = [2, 3, 5, 7];
    let labeller = algebra(2, n, a2(), Twist::Half, budget)?;
    let mut failures = Vec::new();
    for (word, terms) in closed_forms(n) {
        let got = interpolate_word(&a2(), n, &primes, Twist::Half, budget, &word)?;
        let expected: BTreeMap<(DimVector, String), LaurentPoly> = terms
            .into_iter()
            .map(|(s, c)| {
                let rep = shape_rep(&labeller, s);
                ((rep.dim.clone(), labeller.category().format_rep(&rep)), c)
            })
            .collect();
        if got != expected {
            failures.push(word_name(&word));
        }
    }
    Ok(report(failures, "6 words over q in {2,3,5,7}, n = 2, one held-out prime".into()))
}

fn criterion_3(budget: u64) -> Result<(bool, String)> {
    let mut differences = Vec::new();
    for twist in [Twist::Half, Twist::Integer] {
        let h = algebra(2, 3, a2(), twist, budget)?;
        let m = h.category().canonical_form(&shape_rep(&h, Shape::Line(Some(1))))?;
        let r = h.check_delta_homomorphism(&m, &m)?;
        let witness = (
            h.category().canonical_form(&shape_rep(&h, Shape::Line(Some(0))))?,
            h.category().canonical_form(&shape_rep(&h, Shape::Line(Some(2))))?,
        );
        if r.homomorphism || !r.lhs_only.contains(&witness) {
            return Ok((false, format!("{twist} twist: witness not isolated on the left-hand side")));
        }
        differences.push((r.lhs_only, r.rhs_only));
    }
    if differences[0] != differences[1] {
        return Ok((false, "support differences depend on the twist".into()));
    }
    Ok((true, format!("{} left-only keys under both twists", differences[0].0.len())))
}

/// Words over `{0, 1}` using each letter at most `max` times.
fn bounded_words(max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for letter in 0..2 {
                if w.iter().filter(|&&x| x == letter).count() < max {
                    let mut w2: Vec<usize> = w.clone();
                    w2.push(letter);
                    next.push(w2);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn fits(words: &[&Vec<usize>], max: usize) -> bool {
    (0..2).all(|l| words.iter().map(|w| w.iter().filter(|&&x| x == l).count()).sum::<usize>() <= max)
}

fn criterion_4(budget: u64) -> Result<(bool, String)> {
    let words = bounded_words(2);
    let mut failures = Vec::new();
    let mut pairs = 0;
    for q in [2, 3] {
        let h = algebra(q, 1, a2(), Twist::Half, budget)?;
        let products: Vec<HallElement> = words.iter().map(|w| h.word_product(w)).collect::<Result<_>>()?;
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                if !fits(&[a, b], 2) {
                    continue;
                }
                pairs += 1;
                if !h.check_delta_homomorphism_elements(&products[i], &products[j])?.homomorphism {
                    failures.push(format!("({},{}) at q={q}", word_name(a), word_name(b)));
                }
            }
        }
    }
    let coeff = poly("v + v^-1");
    for q in [2, 3, 5] {
        let h = algebra(q, 1, a2(), Twist::Half, budget)?;
        if !gkm::serre_residual(&h, 0, 1, &coeff)?.is_zero() {
            failures.push(format!("Serre residual at q={q}"));
        }
    }
    Ok(report(failures, format!("{pairs} product pairs, Serre residual 0 for q in {{2,3,5}}")))
}

fn criterion_5(budget: u64) -> Result<(bool, String)> {
    let coeff = poly("v + v^-1");
    let mut sizes = Vec::new();
    for n in [2, 3] {
        let h = algebra(2, n, a2(), Twist::Half, budget)?;
        let r = gkm::serre_residual(&h, 0, 1, &coeff)?;
        if r.is_zero() {
            return Ok((false, format!("residual vanishes at n={n}")));
        }
        sizes.push(format!("n={n}: {} terms", r.len()));
    }
    Ok((true, sizes.join(", ")))
}

fn criterion_6(budget: u64) -> Result<(bool, String)> {
    let words = bounded_words(2);
    let mut failures = Vec::new();
    let mut triples = 0;
    for preset in ["a2", "two-points"] {
        for (q, n) in PARAM_PAIRS {
            let h = algebra(q, n, Quiver::preset(preset)?, Twist::Half, budget)?;
            let products: Vec<HallElement> = words.iter().map(|w| h.word_product(w)).collect::<Result<_>>()?;
            let unit = h.unit();
            for p in &products {
                if h.twisted_product(&unit, p)? != *p || h.twisted_product(p, &unit)? != *p {
                    failures.push(format!("unit on {preset} q={q},n={n}"));
                }
            }
            for (i, a) in words.iter().enumerate() {
                for (j, b) in words.iter().enumerate() {
                    if !fits(&[a, b], 2) {
                        continue;
                    }
                    let ab = h.twisted_product(&products[i], &products[j])?;
                    for (k, c) in words.iter().enumerate() {
                        if !fits(&[a, b, c], 2) {
                            continue;
                        }
                        triples += 1;
                        let left = h.twisted_product(&ab, &products[k])?;
                        let bc = h.twisted_product(&products[j], &products[k])?;
                        let right = h.twisted_product(&products[i], &bc)?;
                        if left != right {
                            failures.push(format!(
                                "({},{},{}) on {preset} q={q},n={n}",
                                word_name(a),
                                word_name(b),
                                word_name(c)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(report(failures, format!("{triples} triples on a2 and two-points")))
}

fn criterion_7(budget: u64) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    let mut cases = 0;
    for preset in ["a2", "two-points"] {
        for (q, n) in PARAM_PAIRS {
            let h = algebra(q, n, Quiver::preset(preset)?, Twist::Half, budget)?;
            let cat = h.category();
            for dim in DimVector(vec![2, 1]).sub_vectors() {
                for l in h.iso_classes(&dim)?.iter() {
                    for w in dim.sub_vectors() {
                        let rest = dim.checked_sub(&w).expect("w <= dim");
                        for x in h.iso_classes(&rest)?.iter() {
                            for y in h.iso_classes(&w)?.iter() {
                                cases += 1;
                                let direct = cat.conflation_count(l, x, y)?;
                                let f = h.hall_number(l, x, y)?;
                                if direct != f * h.aut(x)? * h.aut(y)? {
                                    failures.push(format!(
                                        "{preset} q={q},n={n} L={} X={} Y={}",
                                        cat.format_rep(l),
                                        cat.format_rep(x),
                                        cat.format_rep(y)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report(failures, format!("{cases} cases")))
}

fn criterion_8(budget: u64, seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quivers = [a2(), Quiver::preset("a3")?];
    let mut failures = Vec::new();
    let mut scaled = 0;
    let mut check_scaling = |ft: &FlagType, quiver: &Quiver, failures: &mut Vec<String>| {
        let base = flag::flag_dims(ft, quiver, 1).flag_dim;
        for n in 1..=4 {
            if flag::flag_dims(ft, quiver, n).flag_dim != n as i64 * base {
                failures.push(format!("scaling {:?}", ft.0));
            }
        }
        scaled += 1;
    };
    for k in 0..100 {
        let quiver = &quivers[k % 2];
        let ft1 = FlagType::random(&mut rng, quiver.vertex_count(), 4, 3);
        let ft2 = FlagType::random(&mut rng, quiver.vertex_count(), 4, 3);
        for i in 0..quiver.vertex_count() {
            if !flag::check_concat_identity(&ft1, &ft2, i) {
                failures.push(format!("concatenation {:?} {:?} at {i}", ft1.0, ft2.0));
            }
        }
        check_scaling(&ft1, quiver, &mut failures);
        check_scaling(&ft2, quiver, &mut failures);
    }
    for k in 0..100u32 {
        let quiver = &quivers[(k % 2) as usize];
        let n = 1 + k % 4;
        let ft1 = FlagType::random(&mut rng, quiver.vertex_count(), 4, 3);
        let ft2 = FlagType::random(&mut rng, quiver.vertex_count(), 4, 3);
        let defect = flag::degree_defect(&ft1, &ft2, quiver, n)?;
        if defect != 0 {
            failures.push(format!("degree defect {defect} for {:?} {:?} n={n}", ft1.0, ft2.0));
        }
        check_scaling(&ft1.concat(&ft2), quiver, &mut failures);
    }
    for (q, n) in PARAM_PAIRS {
        let ring = crate::ring::Ring::with(q, n)?;
        let got = flag::free_grassmannian_count(&ring, 1, 2, budget)?;
        let expected = (q as u128).pow(n) + (q as u128).pow(n - 1);
        if got != expected {
            failures.push(format!("Grassmannian count {got} != {expected} at q={q},n={n}"));
        }
    }
    Ok(report(failures, format!("seed {seed}, 100 + 100 instances, {scaled} scaling checks, 4 Grassmannians")))
}

fn criterion_9(budget: u64) -> Result<(bool, String)> {
    let mut failures = Vec::new();
    for (q, n) in PARAM_PAIRS {
        let h = algebra(q, n, Quiver::preset("two-points")?, Twist::Half, budget)?;
        if !gkm::commutation_check(&h, 0, 1)? {
            failures.push(format!("q={q},n={n}"));
        }
    }
    Ok(report(failures, "4 parameter pairs".into()))
}

fn criterion_10(budget: u64) -> Result<(bool, String)> {
    let h = algebra(2, 2, a2(), Twist::Half, budget)?;
    let q = h.q();
    let mut failures = Vec::new();
    let mut evaluations = 0;
    for grade in DimVector(vec![2, 1]).sub_vectors() {
        for b in grade.sub_vectors() {
            let a = grade.checked_sub(&b).expect("b <= grade");
            for m in h.iso_classes(&a)?.iter() {
                for nn in h.iso_classes(&b)?.iter() {
                    let dual = h.dual_product(&h.char_function(m)?, &h.char_function(nn)?)?;
                    let circ = h.circ_product(m, nn)?;
                    for e in h.iso_classes(&grade)?.iter() {
                        evaluations += 1;
                        let f = h.hall_number(e, m, nn)?;
                        let value = dual.value(e, q);
                        let expected = crate::coeff::SqrtQNumber::from_int(q, f as i64);
                        if value != expected || circ.coeff(e) != expected {
                            failures.push(format!(
                                "E={} M={} N={}",
                                h.category().format_rep(e),
                                h.category().format_rep(m),
                                h.category().format_rep(nn)
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(report(failures, format!("{evaluations} evaluations")))
}
