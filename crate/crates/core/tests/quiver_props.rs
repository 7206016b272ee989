use hallring::error::DEFAULT_BUDGET;
use hallring::quiver::{DimVector, FreeRep, Quiver, RepCategory};
use hallring::ring::{RMatrix, Ring};
use proptest::prelude::*;

fn cat(q: u32, n: u32, preset: &str) -> RepCategory {
    RepCategory::new(Ring::with(q, n).unwrap(), Quiver::preset(preset).unwrap(), DEFAULT_BUDGET)
}

fn random_matrix(ring: &Ring, rows: usize, cols: usize, raw: &[u32]) -> RMatrix {
    let entries = (0..rows * cols).map(|k| ring.from_index(raw[k] % ring.size()).unwrap()).collect();
    RMatrix::from_entries(rows, cols, entries).unwrap()
}

fn random_gl(ring: &Ring, r: usize, raw: &[u32]) -> RMatrix {
    // Force a unit diagonal on a triangular factor and mix with a permutation-free product.
    let mut lower = random_matrix(ring, r, r, raw);
    let mut upper = random_matrix(ring, r, r, &raw[r * r..]);
    for i in 0..r {
        for j in 0..r {
            if j > i {
                lower.set(i, j, ring.zero());
            }
            if j < i {
                upper.set(i, j, ring.zero());
            }
        }
        lower.set(i, i, ring.one());
        let d = upper.get(i, i);
        if !ring.is_unit(d) {
            upper.set(i, i, ring.add(d, ring.one()));
        }
    }
    ring.mat_mul(&lower, &upper).unwrap()
}

fn dim_vec(len: usize) -> impl Strategy<Value = DimVector> {
    proptest::collection::vec(0u32..4, len).prop_map(DimVector)
}

proptest! {
    #[test]
    fn euler_form_is_bilinear(a in dim_vec(3), b in dim_vec(3), c in dim_vec(3)) {
        let cat = cat(2, 2, "a3");
        let e = |x: &DimVector, y: &DimVector| cat.euler_form(x, y).unwrap();
        prop_assert_eq!(e(&a.add(&b), &c), e(&a, &c) + e(&b, &c));
        prop_assert_eq!(e(&a, &b.add(&c)), e(&a, &b) + e(&a, &c));
    }

    #[test]
    fn canonical_form_is_an_orbit_invariant(
        params in prop_oneof![Just((2u32, 2u32)), Just((3, 2)), Just((2, 3))],
        preset in prop_oneof![Just("a2"), Just("a3")],
        raw in proptest::collection::vec(any::<u32>(), 64),
    ) {
        let c = cat(params.0, params.1, preset);
        let ring = c.ring();
        let k = c.quiver().vertex_count();
        // one vertex of rank up to 2 keeps the orbit search of the A_3 path within budget
        let wide = raw[0] as usize % k;
        let dim = DimVector((0..k).map(|i| if i == wide { 1 + raw[1] % 2 } else { 1 }).collect());
        let maps: Vec<RMatrix> = c
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(h, &(s, t))| random_matrix(ring, dim.0[t] as usize, dim.0[s] as usize, &raw[8 + 8 * h..]))
            .collect();
        let x = c.rep(dim.clone(), maps).unwrap();
        let g: Vec<RMatrix> = (0..k).map(|i| random_gl(ring, dim.0[i] as usize, &raw[32 + 8 * i..])).collect();
        let moved: Vec<RMatrix> = x
            .maps
            .iter()
            .zip(c.quiver().arrows())
            .map(|(m, &(s, t))| {
                let gs_inv = ring.mat_inverse(&g[s]).unwrap();
                ring.mat_mul(&ring.mat_mul(&g[t], m).unwrap(), &gs_inv).unwrap()
            })
            .collect();
        let y = FreeRep { dim, maps: moved };
        prop_assert_eq!(c.canonical_form(&x).unwrap(), c.canonical_form(&y).unwrap());
    }
}

#[test]
fn automorphism_counts_satisfy_orbit_stabilizer() {
    // sum over classes of |G| / |Aut| is the number of points of E_V
    for (q, n) in [(2, 1), (2, 2), (3, 2), (2, 3)] {
        let c = cat(q, n, "a2");
        for dim in DimVector(vec![2, 2]).sub_vectors() {
            let group: u128 = dim.0.iter().map(|&r| c.ring().gl_order(r as usize)).product();
            let mut points = 0u128;
            for x in c.iso_classes(&dim).unwrap() {
                let a = c.aut_count(&x).unwrap();
                assert_eq!(group % a, 0);
                points += group / a;
            }
            let size = c.ring().size() as u128;
            assert_eq!(points, size.pow(dim.0[0] * dim.0[1]), "q={q} n={n} dim={dim}");
        }
    }
}

#[test]
fn orbit_sweep_agrees_with_orbit_stabilizer_on_a3() {
    let c = cat(2, 2, "a3");
    for dim in [vec![1, 1, 1], vec![1, 2, 1], vec![2, 1, 1]] {
        let dim = DimVector(dim);
        let group: u128 = dim.0.iter().map(|&r| c.ring().gl_order(r as usize)).product();
        let points: u128 = c.iso_classes(&dim).unwrap().iter().map(|x| group / c.aut_count(x).unwrap()).sum();
        let coords: u32 = c.quiver().arrows().iter().map(|&(s, t)| dim.0[s] * dim.0[t]).sum();
        assert_eq!(points, (c.ring().size() as u128).pow(coords), "dim={dim}");
    }
}
