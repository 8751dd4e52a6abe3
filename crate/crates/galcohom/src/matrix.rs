//! Dense matrices over the integers with exact arithmetic.
//!
//! Everything downstream (group presentations, cochain differentials,
//! localization maps) reduces to Smith or Hermite normal form of an
//! integer matrix, so the transforms are tracked together with their
//! inverses and all arithmetic is arbitrary precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Rows given as slices of machine integers; test convenience.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn from_columns(ngens: usize, cols: &[Vec<BigInt>]) -> Self {
        Self::from_fn(ngens, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        (0..self.cols).map(|j| self.column(j))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn neg(&self) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * k)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.at(i, j).clone() } else { other.at(i, j - self.cols).clone() }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self.at(i, j).clone() } else { other.at(i - self.rows, j).clone() }
        })
    }

    pub fn submatrix_rows(&self, lo: usize, hi: usize) -> IntMatrix {
        Self::from_fn(hi - lo, self.cols, |i, j| self.at(i + lo, j).clone())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row[j] += k * row[i]
    fn add_row_multiple(&mut self, j: usize, i: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.at(j, c) + k * self.at(i, c);
            self.set(j, c, v);
        }
    }

    /// col[j] += k * col[i]
    fn add_col_multiple(&mut self, j: usize, i: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.at(r, j) + k * self.at(r, i);
            self.set(r, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.at(i, c);
            self.set(i, c, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -self.at(r, j);
            self.set(r, j, v);
        }
    }
}

/// Quotient of a by b rounded to nearest, for coefficient control.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if BigInt::from(2) * r.abs() > b.abs() { q + 1 } else { q }
}

/// Result of Smith reduction: `u * a * v = d` with `u`, `v` unimodular and
/// `d` diagonal, each diagonal entry nonnegative and dividing the next.
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.at(i, i).clone()).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let rows = a.rows();
    let cols = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // Elementary operation wrappers keeping u*a*v = d and the inverses in sync.
    macro_rules! row_swap {
        ($i:expr, $j:expr) => {{
            d.swap_rows($i, $j);
            u.swap_rows($i, $j);
            u_inv.swap_cols($i, $j);
        }};
    }
    macro_rules! col_swap {
        ($i:expr, $j:expr) => {{
            d.swap_cols($i, $j);
            v.swap_cols($i, $j);
            v_inv.swap_rows($i, $j);
        }};
    }
    macro_rules! row_add {
        ($j:expr, $i:expr, $k:expr) => {{
            let k = $k;
            d.add_row_multiple($j, $i, &k);
            u.add_row_multiple($j, $i, &k);
            u_inv.add_col_multiple($i, $j, &-k);
        }};
    }
    macro_rules! col_add {
        ($j:expr, $i:expr, $k:expr) => {{
            let k = $k;
            d.add_col_multiple($j, $i, &k);
            v.add_col_multiple($j, $i, &k);
            v_inv.add_row_multiple($i, $j, &-k);
        }};
    }

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // Pivot: smallest nonzero entry of the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d.at(i, j).is_zero() {
                    match &pivot {
                        Some((pi, pj)) if d.at(*pi, *pj).abs() <= d.at(i, j).abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap!(t, pi);
        col_swap!(t, pj);

        loop {
            let mut clean = true;
            for i in (t + 1)..rows {
                if !d.at(i, t).is_zero() {
                    let q = div_nearest(d.at(i, t), d.at(t, t));
                    row_add!(i, t, -q);
                    if !d.at(i, t).is_zero() {
                        // Remainder is strictly smaller; promote it to pivot.
                        row_swap!(t, i);
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..cols {
                if !d.at(t, j).is_zero() {
                    let q = div_nearest(d.at(t, j), d.at(t, t));
                    col_add!(j, t, -q);
                    if !d.at(t, j).is_zero() {
                        col_swap!(t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                // Pivot must divide the whole trailing block for the
                // divisibility chain; fold an offending row in and repeat.
                let mut offender = None;
                'scan: for i in (t + 1)..rows {
                    for j in (t + 1)..cols {
                        if !(d.at(i, j) % d.at(t, t)).is_zero() {
                            offender = Some(i);
                            break 'scan;
                        }
                    }
                }
                match offender {
                    Some(i) => {
                        row_add!(t, i, BigInt::one());
                    }
                    None => break,
                }
            }
        }
        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }
    SmithForm { d, u, u_inv, v, v_inv }
}

/// Column-style Hermite form: `a * u = h` with `u` unimodular.
///
/// Pivots sit on strictly increasing rows with positive values, columns to
/// the right of a pivot column vanish on the pivot row, and entries on the
/// pivot row in earlier columns are reduced into `[0, pivot)`.
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// (pivot_row, pivot_col) pairs in order.
    pub pivots: Vec<(usize, usize)>,
}

pub fn hermite_normal_form(a: &IntMatrix) -> HermiteForm {
    let rows = a.rows();
    let cols = a.cols();
    let mut h = a.clone();
    let mut u = IntMatrix::identity(cols);
    let mut pivots = Vec::new();
    let mut c = 0;
    for r in 0..rows {
        if c >= cols {
            break;
        }
        // Gcd the entries h[r, c..] into column c via column operations.
        loop {
            let mut min: Option<usize> = None;
            for j in c..cols {
                if !h.at(r, j).is_zero() {
                    match min {
                        Some(m) if h.at(r, m).abs() <= h.at(r, j).abs() => {}
                        _ => min = Some(j),
                    }
                }
            }
            let Some(m) = min else { break };
            h.swap_cols(c, m);
            u.swap_cols(c, m);
            let mut done = true;
            for j in (c + 1)..cols {
                if !h.at(r, j).is_zero() {
                    let q = div_nearest(h.at(r, j), h.at(r, c));
                    h.add_col_multiple(j, c, &-&q);
                    u.add_col_multiple(j, c, &-q);
                    if !h.at(r, j).is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h.at(r, c).is_zero() {
            continue;
        }
        if h.at(r, c).is_negative() {
            h.negate_col(c);
            u.negate_col(c);
        }
        // Reduce earlier columns on this pivot row.
        for j in 0..c {
            let q = h.at(r, j).div_mod_floor(h.at(r, c)).0;
            h.add_col_multiple(j, c, &-&q);
            u.add_col_multiple(j, c, &-q);
        }
        pivots.push((r, c));
        c += 1;
    }
    HermiteForm { h, u, pivots }
}

impl HermiteForm {
    /// Does `b` lie in the integer column span?
    pub fn contains(&self, b: &[BigInt]) -> bool {
        self.express(b).is_some()
    }

    /// Coefficients of `b` over the pivot columns, if `b` is in the span.
    pub fn express(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.h.rows());
        let mut res: Vec<BigInt> = b.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.h.cols()];
        for &(r, c) in &self.pivots {
            let (q, rem) = res[r].div_mod_floor(self.h.at(r, c));
            if !rem.is_zero() {
                return None;
            }
            for i in 0..self.h.rows() {
                res[i] -= &q * self.h.at(i, c);
            }
            coeffs[c] = q;
        }
        if res.iter().all(|x| x.is_zero()) { Some(coeffs) } else { None }
    }
}

/// Basis of the integer kernel `{x : a x = 0}`, as matrix columns.
/// The kernel of an integer matrix is a saturated sublattice, so the
/// returned columns are a genuine lattice basis.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let mut cols = Vec::new();
    for j in 0..a.cols() {
        let zero_col = j >= diag.len() || diag[j].is_zero();
        if zero_col {
            cols.push(snf.v.column(j));
        }
    }
    IntMatrix::from_columns(a.cols(), &cols)
}

/// One integer solution of `a x = b`, if any.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), a.rows());
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut z = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        let d = if i < diag.len() { diag[i].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_mod_floor(&d);
            if !r.is_zero() {
                return None;
            }
            if i < a.cols() {
                z[i] = q;
            }
        }
    }
    Some(snf.v.mul_vec(&z))
}

/// A prefactored linear system `a x = b`, for solving many right-hand
/// sides against the same matrix. One Smith reduction, cheap backsolves.
pub struct Solver {
    snf: SmithForm,
    rows: usize,
    cols: usize,
}

impl Solver {
    pub fn new(a: &IntMatrix) -> Self {
        Solver { snf: smith_normal_form(a), rows: a.rows(), cols: a.cols() }
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows);
        let ub = self.snf.u.mul_vec(b);
        let diag = self.snf.diagonal();
        let mut z = vec![BigInt::zero(); self.cols];
        for i in 0..self.rows {
            let d = if i < diag.len() { diag[i].clone() } else { BigInt::zero() };
            if d.is_zero() {
                if !ub[i].is_zero() {
                    return None;
                }
            } else {
                let (q, r) = ub[i].div_mod_floor(&d);
                if !r.is_zero() {
                    return None;
                }
                if i < self.cols {
                    z[i] = q;
                }
            }
        }
        Some(self.snf.v.mul_vec(&z))
    }
}

/// Generators of the lattice `{z : g z ∈ column span of r}`.
///
/// Columns of the result generate the solution lattice (they need not be
/// independent). This is the membership-congruence workhorse behind kernels
/// of homomorphisms between presented groups.
pub fn congruence_kernel(g: &IntMatrix, r: &IntMatrix) -> IntMatrix {
    assert_eq!(g.rows(), r.rows());
    let stacked = g.hstack(r);
    let ker = kernel_basis(&stacked);
    IntMatrix::from_fn(g.cols(), ker.cols(), |i, j| ker.at(i, j).clone())
}

/// Lattice equality test for column spans (over Z).
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    assert_eq!(a.rows(), b.rows());
    let ha = hermite_normal_form(a);
    let hb = hermite_normal_form(b);
    b.columns().all(|c| ha.contains(&c)) && a.columns().all(|c| hb.contains(&c))
}
