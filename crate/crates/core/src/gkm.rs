//! Generalized Kac-Moody relations checked inside the composition subalgebra.

use serde::Serialize;

use crate::coeff::LaurentPoly;
use crate::error::{HallError, Result};
use crate::hall::{HallAlgebra, HallElement};
use crate::quiver::Quiver;

/// Symmetric Borcherds-Cartan matrix with all charges equal to one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorcherdsCartan {
    pub matrix: Vec<Vec<i64>>,
    /// `true` where the simple root is imaginary (`a_ii <= 0`).
    pub imaginary: Vec<bool>,
}

impl BorcherdsCartan {
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }
}

/// Off-diagonal entries count arrows in both directions. The diagonal is 2
/// for `n = 1` and 0 (imaginary) otherwise.
pub fn cartan_from_quiver(quiver: &Quiver, n: u32) -> BorcherdsCartan {
    let k = quiver.vertex_count();
    let diag = if n == 1 { 2 } else { 0 };
    let matrix = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { diag } else { -(quiver.arrows_between(i, j) as i64) })
                .collect()
        })
        .collect();
    BorcherdsCartan { matrix, imaginary: vec![n != 1; k] }
}

fn check_vertex(alg: &HallAlgebra, i: usize) -> Result<()> {
    if i >= alg.quiver().vertex_count() {
        return Err(HallError::UnknownVertex(i.to_string()));
    }
    Ok(())
}

/// Whether `S_i S_j = S_j S_i` holds exactly. Requires `i != j` and `a_ij = 0`.
pub fn commutation_check(alg: &HallAlgebra, i: usize, j: usize) -> Result<bool> {
    check_vertex(alg, i)?;
    check_vertex(alg, j)?;
    if i == j {
        return Err(HallError::Precondition("commutation needs two distinct vertices".into()));
    }
    let a = cartan_from_quiver(alg.quiver(), alg.n()).entry(i, j);
    if a != 0 {
        return Err(HallError::Precondition(format!("a_ij = {a} is nonzero")));
    }
    Ok(alg.word_product(&[i, j])? == alg.word_product(&[j, i])?)
}

/// `S_i^2 S_j - c S_i S_j S_i + S_j S_i^2`, with `c` evaluated at the algebra's `q`.
pub fn serre_residual(alg: &HallAlgebra, i: usize, j: usize, coeff: &LaurentPoly) -> Result<HallElement> {
    check_vertex(alg, i)?;
    check_vertex(alg, j)?;
    if i == j || alg.quiver().arrows_between(i, j) != 1 {
        return Err(HallError::Precondition(
            "the Serre residual needs exactly one arrow between the two vertices".into(),
        ));
    }
    let c = coeff.eval_at_prime(alg.q())?;
    let iij = alg.word_product(&[i, i, j])?;
    let iji = alg.word_product(&[i, j, i])?;
    let jii = alg.word_product(&[j, i, i])?;
    iij.sub(&iji.scale(&c))?.add(&jii)
}
