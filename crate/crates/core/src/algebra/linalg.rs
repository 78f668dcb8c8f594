//! Dense linear algebra over a [`GaloisField`]: echelon forms, spans,
//! annihilators and subspace enumeration. Vectors are `Vec<Elem>` rows.

use super::gf::{Elem, GaloisField};

pub type Vector = Vec<Elem>;
pub type Rows = Vec<Vector>;

/// Reduced row echelon form of the span of `rows`, dropping zero rows.
/// Returns the rows and their pivot columns.
pub fn rref(f: &GaloisField, rows: &[Vector], ncols: usize) -> (Rows, Vec<usize>) {
    let mut m: Rows = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let inv = f.inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let k = m[i][c];
                for j in 0..ncols {
                    let t = f.mul(k, m[r][j]);
                    m[i][j] = f.sub(m[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(f: &GaloisField, rows: &[Vector], ncols: usize) -> usize {
    rref(f, rows, ncols).0.len()
}

/// Echelon basis of `a + b`.
pub fn sum(f: &GaloisField, a: &[Vector], b: &[Vector], ncols: usize) -> Rows {
    let all: Rows = a.iter().chain(b).cloned().collect();
    rref(f, &all, ncols).0
}

/// `dim(a ∩ b)` for subspaces given by spanning rows.
pub fn intersection_dim(f: &GaloisField, a: &[Vector], b: &[Vector], ncols: usize) -> usize {
    let da = rank(f, a, ncols);
    let db = rank(f, b, ncols);
    da + db - sum(f, a, b, ncols).len()
}

/// Basis of `{y : Σ x_i y_i = 0 for all x in span(rows)}`.
pub fn annihilator(f: &GaloisField, rows: &[Vector], ncols: usize) -> Rows {
    let (m, pivots) = rref(f, rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&j| {
            let mut y = vec![0; ncols];
            y[j] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                y[p] = f.neg(m[i][j]);
            }
            y
        })
        .collect()
}

/// Basis of the intersection of two subspaces.
pub fn intersection(f: &GaloisField, a: &[Vector], b: &[Vector], ncols: usize) -> Rows {
    let ann = sum(f, &annihilator(f, a, ncols), &annihilator(f, b, ncols), ncols);
    rref(f, &annihilator(f, &ann, ncols), ncols).0
}

pub fn dot(f: &GaloisField, x: &[Elem], y: &[Elem]) -> Elem {
    x.iter().zip(y).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
}

/// `a ⊗ b` with index `i * b.len() + j`.
pub fn kron(f: &GaloisField, a: &[Elem], b: &[Elem]) -> Vector {
    a.iter().flat_map(|&x| b.iter().map(move |&y| f.mul(x, y))).collect()
}

/// Product `m · v` for a matrix given by rows.
pub fn mat_vec(f: &GaloisField, m: &[Vector], v: &[Elem]) -> Vector {
    m.iter().map(|row| dot(f, row, v)).collect()
}

/// Whether `v` lies in the span of the echelon basis `basis` with `pivots`.
pub fn in_span(f: &GaloisField, basis: &[Vector], pivots: &[usize], v: &[Elem]) -> bool {
    let mut r = v.to_vec();
    for (row, &p) in basis.iter().zip(pivots) {
        let k = r[p];
        if k != 0 {
            for j in 0..r.len() {
                r[j] = f.sub(r[j], f.mul(k, row[j]));
            }
        }
    }
    r.iter().all(|&x| x == 0)
}

/// All subspaces of `F^n` as reduced echelon bases, ordered by dimension,
/// then by pivot set, then by the free entries read row-major.
pub fn enumerate_subspaces(f: &GaloisField, n: usize) -> Vec<Rows> {
    let q = f.order();
    let mut out = Vec::new();
    for d in 0..=n {
        for pivots in combinations(n, d) {
            // free slots: (row, col) with col > pivot[row] and col not a pivot
            let slots: Vec<(usize, usize)> = (0..d)
                .flat_map(|i| {
                    let pv = pivots.clone();
                    (pivots[i] + 1..n).filter(move |c| !pv.contains(c)).map(move |c| (i, c))
                })
                .collect();
            let count = (q as u64).pow(slots.len() as u32);
            for code in 0..count {
                let mut rows = vec![vec![0; n]; d];
                for (i, &p) in pivots.iter().enumerate() {
                    rows[i][p] = 1;
                }
                let mut c = code;
                // last slot varies fastest
                for &(i, j) in slots.iter().rev() {
                    rows[i][j] = (c % q as u64) as Elem;
                    c /= q as u64;
                }
                out.push(rows);
            }
        }
    }
    out
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Number of subspaces of `F_q^n`, or `None` on overflow.
pub fn subspace_count(q: u64, n: u32) -> Option<u128> {
    let mut total: u128 = 0;
    for d in 0..=n {
        // Gaussian binomial [n, d]_q
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for i in 0..d {
            num = num.checked_mul((q as u128).checked_pow(n - i)? - 1)?;
            den = den.checked_mul((q as u128).checked_pow(i + 1)? - 1)?;
        }
        total = total.checked_add(num / den)?;
    }
    Some(total)
}
