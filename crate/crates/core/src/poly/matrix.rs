use std::collections::HashMap;
use std::fmt;

use super::poly::Poly;
use super::ring::RingRef;
use crate::error::{Error, Result};

/// Dense row-major matrix of polynomials over one ring.
#[derive(Clone, PartialEq)]
pub struct PolyMatrix {
    ring: RingRef,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(ring: &RingRef, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { ring: ring.clone(), rows, cols, data: vec![Poly::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &RingRef, n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(ring));
        }
        m
    }

    pub fn from_rows(ring: &RingRef, rows: Vec<Vec<Poly>>) -> Result<PolyMatrix> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(PolyMatrix { ring: ring.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Jacobian `(∂f_i/∂v_j)` for the variable indices `vars`.
    pub fn jacobian(ring: &RingRef, polys: &[Poly], vars: &[usize]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ring, polys.len(), vars.len());
        for (i, f) in polys.iter().enumerate() {
            for (j, v) in vars.iter().enumerate() {
                m.set(i, j, f.derivative(*v));
            }
        }
        m
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!("{}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut m = PolyMatrix::zeros(&self.ring, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = Poly::zero(&self.ring);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), o.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Poly::zero(&self.ring);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn scale(&self, p: &Poly) -> PolyMatrix {
        let data = self.data.iter().map(|x| x * p).collect();
        PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(&self.ring, rows.len(), cols.len());
        for (a, i) in rows.iter().enumerate() {
            for (b, j) in cols.iter().enumerate() {
                m.set(a, b, self.get(*i, *j).clone());
            }
        }
        m
    }

    /// Division-free determinant by expansion over column subsets.
    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let all: Vec<usize> = (0..self.rows).collect();
        Ok(self.minor(&all, &all))
    }

    /// Determinant of the square submatrix on `rows` x `cols`.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Poly {
        assert_eq!(rows.len(), cols.len());
        // Laplace expansion along rows with at most one nonzero entry
        for (a, &i) in rows.iter().enumerate() {
            let nz: Vec<usize> = (0..cols.len()).filter(|&b| !self.get(i, cols[b]).is_zero()).collect();
            if nz.len() > 1 {
                continue;
            }
            let Some(&b) = nz.first() else {
                return Poly::zero(&self.ring);
            };
            let r2: Vec<usize> = rows.iter().enumerate().filter(|(x, _)| *x != a).map(|(_, v)| *v).collect();
            let c2: Vec<usize> = cols.iter().enumerate().filter(|(x, _)| *x != b).map(|(_, v)| *v).collect();
            let m = self.get(i, cols[b]) * &self.minor(&r2, &c2);
            return if (a + b) % 2 == 1 { -m } else { m };
        }
        let k = rows.len();
        if k == 0 {
            return Poly::one(&self.ring);
        }
        assert!(k <= 20, "minor too large for subset expansion");
        let mut dp: HashMap<u32, Poly> = HashMap::new();
        dp.insert(0, Poly::one(&self.ring));
        for &i in rows {
            let mut next: HashMap<u32, Poly> = HashMap::new();
            for (mask, val) in &dp {
                for (b, &j) in cols.iter().enumerate() {
                    if mask & (1 << b) != 0 {
                        continue;
                    }
                    let e = self.get(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    let inversions = (mask >> (b + 1)).count_ones();
                    let mut t = val * e;
                    if inversions % 2 == 1 {
                        t = -t;
                    }
                    let key = mask | (1 << b);
                    let slot = next.entry(key).or_insert_with(|| Poly::zero(&self.ring));
                    *slot = &*slot + &t;
                }
            }
            next.retain(|_, v| !v.is_zero());
            dp = next;
        }
        dp.remove(&((1u32 << k) - 1)).unwrap_or_else(|| Poly::zero(&self.ring))
    }

    /// Classical adjugate `adj(M)` with `M adj(M) = adj(M) M = det(M) Id`.
    pub fn adjugate(&self) -> Result<PolyMatrix> {
        if self.rows != self.cols {
            return Err(Error::Dimension("adjugate of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut adj = PolyMatrix::zeros(&self.ring, n, n);
        if n == 1 {
            adj.set(0, 0, Poly::one(&self.ring));
            return Ok(adj);
        }
        for i in 0..n {
            let rows: Vec<usize> = (0..n).filter(|x| *x != i).collect();
            for j in 0..n {
                let cols: Vec<usize> = (0..n).filter(|x| *x != j).collect();
                let mut c = self.minor(&rows, &cols);
                if (i + j) % 2 == 1 {
                    c = -c;
                }
                adj.set(j, i, c);
            }
        }
        Ok(adj)
    }

    /// Completes an `r x n` matrix to `n x n` by appending unit rows `e_k` for the
    /// indices `k` outside `cols` (increasing). Returns `(H, sign)` with
    /// `det(H) = sign * minor(cols)`.
    pub fn complete_to_square(&self, cols: &[usize]) -> Result<(PolyMatrix, i32)> {
        let (r, n) = (self.rows, self.cols);
        check_cols(cols, r, n)?;
        let rest: Vec<usize> = (0..n).filter(|k| !cols.contains(k)).collect();
        let mut h = PolyMatrix::zeros(&self.ring, n, n);
        for i in 0..r {
            for j in 0..n {
                h.set(i, j, self.get(i, j).clone());
            }
        }
        for (t, k) in rest.iter().enumerate() {
            h.set(r + t, *k, Poly::one(&self.ring));
        }
        Ok((h, permutation_sign(cols, &rest)))
    }

    /// `adj(H)` for `H = complete_to_square(cols)`, computed from the `r x r` block only.
    pub fn completed_adjugate(&self, cols: &[usize]) -> Result<(PolyMatrix, Poly)> {
        let (r, n) = (self.rows, self.cols);
        check_cols(cols, r, n)?;
        let rest: Vec<usize> = (0..n).filter(|k| !cols.contains(k)).collect();
        let sign = permutation_sign(cols, &rest);
        let all: Vec<usize> = (0..r).collect();
        let a_s = self.submatrix(&all, cols);
        let a_r = self.submatrix(&all, &rest);
        let adj_s = a_s.adjugate()?;
        let det_s = a_s.det()?;
        let prod = adj_s.mul(&a_r)?;
        let sg = |p: &Poly| if sign < 0 { -p } else { p.clone() };
        let mut adj = PolyMatrix::zeros(&self.ring, n, n);
        for (a, &ca) in cols.iter().enumerate() {
            for b in 0..r {
                adj.set(ca, b, sg(adj_s.get(a, b)));
            }
            for t in 0..rest.len() {
                adj.set(ca, r + t, -sg(prod.get(a, t)));
            }
        }
        for (t, &k) in rest.iter().enumerate() {
            adj.set(k, r + t, sg(&det_s));
        }
        Ok((adj, sg(&det_s)))
    }

    /// All nonzero `k x k` minors as `(row set, column set, minor)`.
    pub fn minors(&self, k: usize) -> Vec<(Vec<usize>, Vec<usize>, Poly)> {
        let mut out = Vec::new();
        for rows in subsets(self.rows, k) {
            for cols in subsets(self.cols, k) {
                let m = self.minor(&rows, &cols);
                if !m.is_zero() {
                    out.push((rows.clone(), cols, m));
                }
            }
        }
        out
    }
}

fn check_cols(cols: &[usize], r: usize, n: usize) -> Result<()> {
    if cols.len() != r || r > n {
        return Err(Error::Dimension(format!("need {r} column indices out of {n}")));
    }
    let mut seen = vec![false; n];
    for &c in cols {
        if c >= n || seen[c] {
            return Err(Error::Dimension("column indices out of range or repeated".into()));
        }
        seen[c] = true;
    }
    Ok(())
}

/// Sign of the permutation listing `first` then `second`.
fn permutation_sign(first: &[usize], second: &[usize]) -> i32 {
    let seq: Vec<usize> = first.iter().chain(second).copied().collect();
    let mut inv = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
