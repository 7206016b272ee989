//! Deterministic text tables and JSON for Hall elements.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::{LaurentPoly, SqrtQNumber};
use crate::error::{HallError, Result};
use crate::hall::{HallElement, TensorElement};
use crate::quiver::{DimVector, FreeRep, Quiver, RepCategory};
use crate::ring::{RMatrix, Ring, RingParams};

/// Left-aligned columns separated by two spaces, no trailing whitespace.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (k, (c, w)) in cells.iter().zip(&widths).enumerate() {
            if k + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(&format!("{c:<w$}  "));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(|s| s.as_str()).collect()));
    }
    out
}

pub fn sqrtq_text(c: &SqrtQNumber) -> String {
    c.to_string()
}

/// Rows of (grade, representative, coefficient), sorted by grade then representative.
pub fn hall_element_table(cat: &RepCategory, e: &HallElement) -> String {
    if e.is_zero() {
        return "0\n".to_string();
    }
    let rows: Vec<Vec<String>> = e
        .terms()
        .iter()
        .map(|(x, c)| vec![x.dim.to_string(), cat.format_rep(x), sqrtq_text(c)])
        .collect();
    table(&["grade", "representative", "coefficient"], &rows)
}

pub fn tensor_table(cat: &RepCategory, t: &TensorElement) -> String {
    if t.terms().is_empty() {
        return "0\n".to_string();
    }
    let rows: Vec<Vec<String>> = t
        .terms()
        .iter()
        .map(|((m, n), c)| vec![cat.format_rep(m), cat.format_rep(n), sqrtq_text(c)])
        .collect();
    table(&["left", "right", "coefficient"], &rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub dim: DimVector,
    /// Per arrow, rows of entries, each entry its list of `t`-coefficients.
    pub maps: Vec<Vec<Vec<Vec<u32>>>>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub a: String,
    pub b: String,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub rep: RepJson,
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallElementJson {
    pub q: u32,
    pub n: u32,
    pub quiver: Quiver,
    pub terms: Vec<TermJson>,
}

pub fn rep_json(cat: &RepCategory, x: &FreeRep) -> RepJson {
    let ring = cat.ring();
    let maps = x
        .maps
        .iter()
        .map(|m| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| ring.coeffs(m.get(i, j))).collect())
                .collect()
        })
        .collect();
    RepJson { dim: x.dim.clone(), maps, label: cat.format_rep(x) }
}

pub fn rep_from_json(cat: &RepCategory, r: &RepJson) -> Result<FreeRep> {
    let ring = cat.ring();
    let maps = r
        .maps
        .iter()
        .zip(cat.quiver().arrows())
        .map(|(rows, &(s, _))| {
            if rows.is_empty() {
                Ok(RMatrix::zero(0, r.dim.0.get(s).copied().unwrap_or(0) as usize))
            } else {
                ring.mat_from_coeffs(rows)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    cat.rep(r.dim.clone(), maps)
}

fn coeff_json(c: &SqrtQNumber) -> CoeffJson {
    let p = |r: &num::BigRational| LaurentPoly::constant(r.clone()).to_string();
    CoeffJson { a: p(&c.a), b: p(&c.b), text: c.to_string() }
}

fn coeff_from_json(q: u32, c: &CoeffJson) -> Result<SqrtQNumber> {
    let a: LaurentPoly = c.a.parse()?;
    let b: LaurentPoly = c.b.parse()?;
    if a.terms().any(|(e, _)| e != 0) || b.terms().any(|(e, _)| e != 0) {
        return Err(HallError::Parse("coefficient components must be rational".into()));
    }
    Ok(SqrtQNumber { q, a: a.coeff(0), b: b.coeff(0) })
}

pub fn hall_element_json(cat: &RepCategory, e: &HallElement) -> HallElementJson {
    let p = e.params();
    HallElementJson {
        q: p.q,
        n: p.n,
        quiver: e.quiver().clone(),
        terms: e
            .terms()
            .iter()
            .map(|(x, c)| TermJson { rep: rep_json(cat, x), coeff: coeff_json(c) })
            .collect(),
    }
}

/// Rebuilds a Hall element; representatives are brought to canonical form.
pub fn hall_element_from_json(j: &HallElementJson, budget: u64) -> Result<HallElement> {
    let params = RingParams::new(j.q, j.n)?;
    let cat = RepCategory::new(Ring::new(params)?, j.quiver.clone(), budget);
    let mut e = HallElement::zero(params, j.quiver.clone());
    for t in &j.terms {
        let x = cat.canonical_form(&rep_from_json(&cat, &t.rep)?)?;
        e.add_term(x, &coeff_from_json(j.q, &t.coeff)?);
    }
    Ok(e)
}

/// Symbolic coefficients keyed by representative label.
pub fn laurent_table(rows: &BTreeMap<(DimVector, String), LaurentPoly>) -> String {
    let rows: Vec<Vec<String>> = rows
        .iter()
        .map(|((d, label), p)| vec![d.to_string(), label.clone(), p.to_string()])
        .collect();
    table(&["grade", "representative", "coefficient"], &rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_BUDGET;
    use crate::hall::{HallAlgebra, Twist};

    #[test]
    fn table_alignment() {
        let t = table(&["a", "bb"], &[vec!["xyz".into(), "1".into()]]);
        assert_eq!(t, "a    bb\nxyz  1\n");
    }

    #[test]
    fn json_round_trip() {
        for preset in ["a2", "two-points", "a3"] {
            let h = HallAlgebra::with(2, 2, Quiver::preset(preset).unwrap(), Twist::Half, DEFAULT_BUDGET).unwrap();
            let e = h.word_product(&[0, 1, 0]).unwrap();
            let j = hall_element_json(h.category(), &e);
            let text = serde_json::to_string(&j).unwrap();
            let back: HallElementJson = serde_json::from_str(&text).unwrap();
            assert_eq!(hall_element_from_json(&back, DEFAULT_BUDGET).unwrap(), e);
        }
    }

    #[test]
    fn element_table() {
        let h = HallAlgebra::with(2, 2, Quiver::preset("a2").unwrap(), Twist::Half, DEFAULT_BUDGET).unwrap();
        let t = hall_element_table(h.category(), &h.word_product(&[1, 0]).unwrap());
        assert_eq!(t, "grade  representative  coefficient\n(1,1)  1->2: [[0]]     1\n");
    }
}
