//! Dimension and shift bookkeeping for free flag varieties over `R`.

use rand::Rng;
use serde::Serialize;

use crate::error::{HallError, Result};
use crate::quiver::{DimVector, Quiver};
use crate::ring::Ring;

/// A flag type `((i_1, k_1), ..., (i_m, k_m))`: the `l`-th step adds a free
/// summand of rank `k_l` at vertex `i_l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagType(pub Vec<(usize, u32)>);

impl FlagType {
    pub fn new(quiver: &Quiver, steps: Vec<(usize, u32)>) -> Result<Self> {
        for &(i, k) in &steps {
            if i >= quiver.vertex_count() {
                return Err(HallError::UnknownVertex(i.to_string()));
            }
            if k == 0 {
                return Err(HallError::InvalidParams("flag step of rank 0".into()));
            }
        }
        Ok(FlagType(steps))
    }

    pub fn concat(&self, other: &FlagType) -> FlagType {
        FlagType(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Total rank added at each vertex.
    pub fn rank_vector(&self, vertex_count: usize) -> DimVector {
        let mut d = DimVector::zero(vertex_count);
        for &(i, k) in &self.0 {
            d.0[i] += k;
        }
        d
    }

    /// Random flag type of length `1..=max_len` with ranks in `1..=max_k`.
    pub fn random(rng: &mut impl Rng, vertex_count: usize, max_len: usize, max_k: u32) -> FlagType {
        let len = rng.gen_range(1..=max_len);
        FlagType((0..len).map(|_| (rng.gen_range(0..vertex_count), rng.gen_range(1..=max_k))).collect())
    }
}

/// `N_i = sum_{r < r'} k_r k_r'` over steps at vertex `i`.
pub fn n_vertex(ft: &FlagType, i: usize) -> i64 {
    let mut acc = 0;
    let mut before = 0i64;
    for &(j, k) in &ft.0 {
        if j == i {
            acc += before * k as i64;
            before += k as i64;
        }
    }
    acc
}

/// `N_h = sum_{r' < r} k_r' k_r` with step `r'` at the source of `h` and `r` at its target.
pub fn n_arrow(ft: &FlagType, arrow: (usize, usize)) -> i64 {
    let (s, t) = arrow;
    let mut acc = 0;
    let mut at_source = 0i64;
    for &(j, k) in &ft.0 {
        if j == t {
            acc += at_source * k as i64;
        }
        if j == s {
            at_source += k as i64;
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlagDims {
    pub flag_dim: i64,
    pub bundle_rank: i64,
    pub total_dim: i64,
    /// Rank of the fibres of the evaluation map, `(n - 1) sum_i N_i`.
    pub fibre_rank: i64,
    pub perverse_shift: i64,
}

pub fn flag_dims(ft: &FlagType, quiver: &Quiver, n: u32) -> FlagDims {
    let n = n as i64;
    let sum_vertex: i64 = (0..quiver.vertex_count()).map(|i| n_vertex(ft, i)).sum();
    let sum_arrow: i64 = quiver.arrows().iter().map(|&h| n_arrow(ft, h)).sum();
    let flag_dim = n * sum_vertex;
    let bundle_rank = n * sum_arrow;
    let total_dim = flag_dim + bundle_rank;
    let fibre_rank = (n - 1) * sum_vertex;
    FlagDims { flag_dim, bundle_rank, total_dim, fibre_rank, perverse_shift: total_dim + fibre_rank }
}

fn check_lengths(quiver: &Quiver, t: &DimVector, w: &DimVector) -> Result<()> {
    if t.len() != quiver.vertex_count() || w.len() != quiver.vertex_count() {
        return Err(HallError::Shape(format!(
            "dimension vectors {t} and {w} for a quiver with {} vertices",
            quiver.vertex_count()
        )));
    }
    Ok(())
}

/// `(d1, d2)` for the parabolic attached to `V = T + W`.
pub fn d1_d2(t: &DimVector, w: &DimVector, quiver: &Quiver, n: u32) -> Result<(i64, i64)> {
    check_lengths(quiver, t, w)?;
    let n = n as i64;
    let (t, w) = (&t.0, &w.0);
    let mut d1 = 0;
    let mut d2 = 0;
    for i in 0..t.len() {
        let (ti, wi) = (t[i] as i64, w[i] as i64);
        let vi = ti + wi;
        d2 += n * (ti * ti + wi * wi);
        d1 += n * (vi * vi - ti * wi);
    }
    for &(s, h) in quiver.arrows() {
        d1 += n * t[s] as i64 * w[h] as i64;
    }
    Ok((d1, d2))
}

fn cross(t: &DimVector, w: &DimVector) -> i64 {
    t.0.iter().zip(&w.0).map(|(&a, &b)| a as i64 * b as i64).sum()
}

pub fn induction_shift(t: &DimVector, w: &DimVector, quiver: &Quiver, n: u32) -> Result<i64> {
    let (d1, d2) = d1_d2(t, w, quiver, n)?;
    Ok(d1 - d2 + (n as i64 - 1) * cross(t, w))
}

/// Uses `dim G_V / P = n sum_i t_i w_i`.
pub fn restriction_shift(t: &DimVector, w: &DimVector, quiver: &Quiver, n: u32) -> Result<i64> {
    let (d1, d2) = d1_d2(t, w, quiver, n)?;
    let g_over_p = n as i64 * cross(t, w);
    Ok(d1 - d2 - 2 * g_over_p + (n as i64 - 1) * cross(t, w))
}

/// `N_i(ft1 ft2) - N_i(ft1) - N_i(ft2)` equals the product of the ranks added at `i`.
pub fn check_concat_identity(ft1: &FlagType, ft2: &FlagType, i: usize) -> bool {
    let lhs = n_vertex(&ft1.concat(ft2), i) - n_vertex(ft1, i) - n_vertex(ft2, i);
    let rank = |ft: &FlagType| ft.0.iter().filter(|s| s.0 == i).map(|s| s.1 as i64).sum::<i64>();
    lhs == rank(ft1) * rank(ft2)
}

/// `d(T, ft1) + d(W, ft2) + d1 - d2 - d(V, ft1 ft2)`, which should vanish.
pub fn degree_defect(ft1: &FlagType, ft2: &FlagType, quiver: &Quiver, n: u32) -> Result<i64> {
    let k = quiver.vertex_count();
    let (t, w) = (ft1.rank_vector(k), ft2.rank_vector(k));
    let (d1, d2) = d1_d2(&t, &w, quiver, n)?;
    let d = |ft: &FlagType| flag_dims(ft, quiver, n).total_dim;
    Ok(d(ft1) + d(ft2) + d1 - d2 - d(&ft1.concat(ft2)))
}

/// Number of free rank-`s` direct summands of `R^l`, by enumeration of echelon forms.
pub fn free_grassmannian_count(ring: &Ring, s: usize, l: usize, budget: u64) -> Result<u128> {
    if s > l {
        return Ok(0);
    }
    Ok(ring.free_summands(l, s, budget)?.len() as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Quiver {
        Quiver::preset("a2").unwrap()
    }

    fn ft(steps: &[(usize, u32)]) -> FlagType {
        FlagType(steps.to_vec())
    }

    #[test]
    fn n_examples() {
        assert_eq!(n_vertex(&ft(&[(0, 1), (0, 1)]), 0), 1);
        assert_eq!(n_vertex(&ft(&[(0, 1), (1, 1)]), 0), 0);
        assert_eq!(n_vertex(&ft(&[(0, 2), (0, 3)]), 0), 6);
        assert_eq!(n_arrow(&ft(&[(0, 1), (1, 1)]), (0, 1)), 1);
        assert_eq!(n_arrow(&ft(&[(1, 1), (0, 1)]), (0, 1)), 0);
        assert_eq!(n_arrow(&ft(&[(0, 2), (1, 3)]), (0, 1)), 6);
    }

    #[test]
    fn dims_examples() {
        let d = flag_dims(&ft(&[(0, 1), (1, 1)]), &a2(), 2);
        assert_eq!((d.total_dim, d.perverse_shift), (2, 2));
        assert_eq!(flag_dims(&ft(&[(0, 1), (0, 1)]), &a2(), 3).flag_dim, 3);
        let d = flag_dims(&ft(&[(0, 2), (1, 1), (0, 1)]), &a2(), 1);
        assert_eq!(d.perverse_shift, d.total_dim);
        assert!(FlagType::new(&a2(), vec![(2, 1)]).is_err());
    }

    #[test]
    fn d1_d2_examples() {
        let q = a2();
        let e = |v: &[u32]| DimVector(v.to_vec());
        assert_eq!(d1_d2(&e(&[1, 0]), &e(&[0, 1]), &q, 1).unwrap(), (3, 2));
        assert_eq!(d1_d2(&e(&[0, 0]), &e(&[2, 1]), &q, 2).unwrap(), (10, 10));
        assert_eq!(d1_d2(&e(&[1, 1]), &e(&[0, 0]), &q, 2).unwrap(), (4, 4));
        assert_eq!(induction_shift(&e(&[1, 0]), &e(&[0, 1]), &q, 2).unwrap(), 2);
        assert_eq!(induction_shift(&e(&[0, 0]), &e(&[0, 0]), &q, 3).unwrap(), 0);
        assert_eq!(restriction_shift(&e(&[0, 0]), &e(&[0, 0]), &q, 3).unwrap(), 0);
        assert!(d1_d2(&e(&[1]), &e(&[0, 1]), &q, 1).is_err());
    }

    #[test]
    fn concat_examples() {
        assert!(check_concat_identity(&ft(&[(0, 1)]), &ft(&[(0, 1)]), 0));
        assert!(check_concat_identity(&ft(&[(0, 1)]), &ft(&[(1, 1)]), 0));
        assert!(check_concat_identity(&ft(&[(0, 2)]), &ft(&[(0, 3)]), 0));
    }

    #[test]
    fn grassmannian_examples() {
        let r = Ring::with(2, 2).unwrap();
        assert_eq!(free_grassmannian_count(&r, 1, 2, 1 << 20).unwrap(), 6);
        assert_eq!(free_grassmannian_count(&r, 3, 3, 1 << 20).unwrap(), 1);
        assert_eq!(free_grassmannian_count(&r, 0, 3, 1 << 20).unwrap(), 1);
    }
}
