//! Dense linear algebra over the prime field Z/q.

pub(crate) fn inv_mod(a: u32, q: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(q));
    // q is prime, so a^(q-2) is the inverse.
    pow_mod(a, q - 2, q)
}

pub(crate) fn pow_mod(a: u32, mut e: u32, q: u32) -> u32 {
    let mut acc: u64 = 1 % q as u64;
    let mut base = (a % q) as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q as u64;
        }
        base = base * base % q as u64;
        e >>= 1;
    }
    acc as u32
}

/// Row-reduces `m` in place to reduced row echelon form and returns the pivot columns.
pub(crate) fn rref(m: &mut [Vec<u32>], cols: usize, q: u32) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, p);
        let inv = inv_mod(m[row][col], q) as u64;
        for x in m[row].iter_mut().take(cols) {
            *x = (*x as u64 * inv % q as u64) as u32;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col] as u64;
                let pivot_row = m[row].clone();
                for (x, &pc) in m[r].iter_mut().zip(&pivot_row).take(cols) {
                    let sub = f * pc as u64 % q as u64;
                    *x = ((*x as u64 + q as u64 - sub) % q as u64) as u32;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub(crate) fn rank(rows: &[Vec<u32>], cols: usize, q: u32) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, cols, q).len()
}

/// Basis of the right kernel `{x : A x = 0}` of a `rows x cols` matrix.
pub(crate) fn nullspace(a: &[Vec<u32>], cols: usize, q: u32) -> Vec<Vec<u32>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m, cols, q);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u32; cols];
            x[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = (q - m[r][f]) % q;
            }
            x
        })
        .collect()
}
