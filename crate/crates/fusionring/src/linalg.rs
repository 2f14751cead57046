//! Dense integer matrices, Smith normal form with transforms, and an
//! integer row-echelon accumulator for row lattices.
//!
//! All arithmetic is checked 64-bit: overflow is a hard failure, never a
//! silent wrap. Pivoting is smallest-absolute-value with a fixed scan
//! order, so results are reproducible across runs and platforms.

use std::fmt;

#[inline]
fn add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer overflow in exact linear algebra")
}

#[inline]
fn mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer overflow in exact linear algebra")
}

/// Centered residue in `(−m/2, m/2]`.
#[inline]
fn center(m: i64, v: i64) -> i64 {
    let r = v.rem_euclid(m);
    if 2 * r > m {
        r - m
    } else {
        r
    }
}

/// Centers only once a value grows large. Reduction mod m is valid at any
/// time for the row lattices this feeds (they contain m·ℤⁿ), but the
/// division is expensive, so the common small case skips it. The threshold
/// leaves headroom for one multiply-add pair: |q·p| ≤ LIMIT² < i64::MAX/4.
#[inline]
fn lazy_center(m: i64, v: i64) -> i64 {
    const LIMIT: i64 = 1 << 30;
    if v.abs() > LIMIT {
        center(m, v)
    } else {
        v
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        Mat {
            rows: nrows,
            cols,
            data,
        }
    }

    /// Builds a matrix from columns.
    pub fn from_cols(cols: Vec<Vec<i64>>, rows: usize) -> Self {
        let ncols = cols.len();
        let mut m = Mat::zeros(rows, ncols);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged column");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * ncols + j] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn mul_mat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = add(out.at(i, j), mul(a, other.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, x.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0i64, |acc, (&a, &b)| add(acc, mul(a, b)))
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.at(i, j));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: i64) {
        if c == 0 {
            return;
        }
        for j in 0..self.cols {
            let v = add(self.at(dst, j), mul(c, self.at(src, j)));
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += c * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, c: i64) {
        if c == 0 {
            return;
        }
        for i in 0..self.rows {
            let v = add(self.at(i, dst), mul(c, self.at(i, src)));
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = self.at(i, j);
            self.set(i, j, v.checked_neg().expect("integer overflow"));
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = self.at(i, j);
            self.set(i, j, v.checked_neg().expect("integer overflow"));
        }
    }
}

/// Which transform pairs [`smith_with`] should carry along. The linear
/// algebra callers mostly need one side only, and the transform updates are
/// the dominant cost at a few hundred unknowns.
#[derive(Debug, Clone, Copy)]
pub struct SnfTracking {
    pub rows: bool,
    pub cols: bool,
}

impl SnfTracking {
    pub const BOTH: SnfTracking = SnfTracking { rows: true, cols: true };
    pub const ROWS: SnfTracking = SnfTracking { rows: true, cols: false };
    pub const COLS: SnfTracking = SnfTracking { rows: false, cols: true };
}

/// Smith normal form `U·A·V = D` with `D` diagonal, `d₁ | d₂ | …`. The
/// transforms and their inverses are present when requested.
pub struct Snf {
    pub diag: Vec<i64>,
    pub u: Option<Mat>,
    pub uinv: Option<Mat>,
    pub v: Option<Mat>,
    pub vinv: Option<Mat>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|&&d| d != 0).count()
    }

    pub fn u(&self) -> &Mat {
        self.u.as_ref().expect("row transforms were not tracked")
    }

    pub fn uinv(&self) -> &Mat {
        self.uinv.as_ref().expect("row transforms were not tracked")
    }

    pub fn v(&self) -> &Mat {
        self.v.as_ref().expect("column transforms were not tracked")
    }

    pub fn vinv(&self) -> &Mat {
        self.vinv.as_ref().expect("column transforms were not tracked")
    }
}

/// Smith normal form with both transform pairs tracked.
pub fn smith(a: &Mat) -> Snf {
    smith_with(a, SnfTracking::BOTH)
}

/// Computes the Smith normal form. Pivot selection scans for the smallest
/// nonzero absolute value in the untouched submatrix, row-major.
pub fn smith_with(a: &Mat, tracking: SnfTracking) -> Snf {
    let mut s = a.clone();
    let (m, n) = (s.rows, s.cols);
    let mut u = tracking.rows.then(|| Mat::identity(m));
    let mut uinv = tracking.rows.then(|| Mat::identity(m));
    let mut v = tracking.cols.then(|| Mat::identity(n));
    let mut vinv = tracking.cols.then(|| Mat::identity(n));

    // Row op row[dst] += c·row[src]: U ← E·U, U⁻¹ ← U⁻¹·E⁻¹.
    macro_rules! row_op {
        ($dst:expr, $src:expr, $c:expr) => {{
            s.add_row($dst, $src, $c);
            if let Some(u) = u.as_mut() {
                u.add_row($dst, $src, $c);
            }
            if let Some(uinv) = uinv.as_mut() {
                uinv.add_col($src, $dst, -($c));
            }
        }};
    }
    macro_rules! col_op {
        ($dst:expr, $src:expr, $c:expr) => {{
            s.add_col($dst, $src, $c);
            if let Some(v) = v.as_mut() {
                v.add_col($dst, $src, $c);
            }
            if let Some(vinv) = vinv.as_mut() {
                vinv.add_row($src, $dst, -($c));
            }
        }};
    }

    let bound = m.min(n);
    let mut k = 0;
    while k < bound {
        // Smallest nonzero |entry| in the submatrix at (k.., k..).
        let mut pivot: Option<(usize, usize, i64)> = None;
        for i in k..m {
            for j in k..n {
                let val = s.at(i, j).unsigned_abs();
                if val != 0 && pivot.is_none_or(|(_, _, p)| val < p.unsigned_abs()) {
                    pivot = Some((i, j, s.at(i, j)));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else {
            break; // remaining submatrix is zero
        };
        s.swap_rows(k, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(k, pi);
        }
        if let Some(uinv) = uinv.as_mut() {
            uinv.swap_cols(k, pi);
        }
        s.swap_cols(k, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(k, pj);
        }
        if let Some(vinv) = vinv.as_mut() {
            vinv.swap_rows(k, pj);
        }

        // Reduce column and row k against the pivot; remainders shrink the
        // pivot on the next pass.
        let mut clean = true;
        for i in k + 1..m {
            let x = s.at(i, k);
            if x != 0 {
                let q = x.div_euclid(s.at(k, k));
                row_op!(i, k, -q);
                if s.at(i, k) != 0 {
                    clean = false;
                }
            }
        }
        for j in k + 1..n {
            let x = s.at(k, j);
            if x != 0 {
                let q = x.div_euclid(s.at(k, k));
                col_op!(j, k, -q);
                if s.at(k, j) != 0 {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // Pivot must divide every remaining entry so invariant factors chain.
        let p = s.at(k, k);
        let mut offender: Option<usize> = None;
        'scan: for i in k + 1..m {
            for j in k + 1..n {
                if s.at(i, j).rem_euclid(p.abs()) != 0 {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            row_op!(k, i, 1);
            continue;
        }
        k += 1;
    }
    for i in 0..bound {
        if s.at(i, i) < 0 {
            s.negate_row(i);
            if let Some(u) = u.as_mut() {
                u.negate_row(i);
            }
            if let Some(uinv) = uinv.as_mut() {
                uinv.negate_col(i);
            }
        }
    }
    let diag = (0..bound).map(|i| s.at(i, i)).collect();
    Snf {
        diag,
        u,
        uinv,
        v,
        vinv,
    }
}

/// Basis of the integer kernel `{x : A·x = 0}`: the columns of `V` beyond
/// the rank of `A`.
pub fn kernel_basis(a: &Mat) -> Vec<Vec<i64>> {
    let snf = smith_with(a, SnfTracking::COLS);
    let rank = snf.rank();
    (rank..a.cols()).map(|j| snf.v().col(j)).collect()
}

/// Row-lattice accumulator working modulo `m`: maintains rows with distinct
/// leading columns, every entry kept in the centered range `(−m/2, m/2]`.
///
/// Centering adds multiples of `m·eᵢ` to rows, so the invariant is not the
/// exact row span but the span plus `m·ℤⁿ`; [`RowEchelon::into_matrix`]
/// therefore stacks `m`·identity rows below the reduced rows. That combined
/// lattice is exactly what mod-`m` constraint systems need, and the bound on
/// entries keeps 64-bit arithmetic safe regardless of input order.
pub struct RowEchelon {
    cols: usize,
    modulus: i64,
    rows: Vec<Vec<i64>>, // sorted by strictly increasing leading column
}

impl RowEchelon {
    pub fn new(cols: usize, modulus: i64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        RowEchelon {
            cols,
            modulus,
            rows: Vec::new(),
        }
    }

    fn lead(row: &[i64]) -> Option<usize> {
        row.iter().position(|&v| v != 0)
    }

    pub fn add_row(&mut self, mut row: Vec<i64>) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        let m = self.modulus;
        for v in row.iter_mut() {
            *v = lazy_center(m, *v);
        }
        // Entries before the current lead stay zero through swaps and
        // subtractions, so the lead scan can resume where it left off.
        let mut from = 0;
        while let Some(lead) = row[from..].iter().position(|&v| v != 0).map(|p| p + from) {
            from = lead;
            let slot = self
                .rows
                .binary_search_by_key(&lead, |r| Self::lead(r).expect("stored rows are nonzero"));
            match slot {
                Ok(idx) => {
                    // gcd-reduce the incoming row against the pivot row,
                    // swapping so the smaller leading entry survives. The
                    // leading value strictly decreases, so this terminates.
                    loop {
                        let p = self.rows[idx][lead];
                        let q = row[lead].div_euclid(p);
                        if q != 0 {
                            for (slot, &pv) in
                                row[lead..].iter_mut().zip(&self.rows[idx][lead..])
                            {
                                if pv != 0 {
                                    *slot = lazy_center(m, add(*slot, mul(-q, pv)));
                                }
                            }
                        }
                        if row[lead] == 0 {
                            break;
                        }
                        std::mem::swap(&mut self.rows[idx], &mut row);
                    }
                }
                Err(idx) => {
                    self.rows.insert(idx, row);
                    return;
                }
            }
        }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// The reduced rows stacked over `m`·identity: a generating set of
    /// (fed row lattice) + `m·ℤⁿ`, with all entries centered mod `m`.
    pub fn into_matrix(self) -> Mat {
        let cols = self.cols;
        let m = self.modulus;
        let mut rows = self.rows;
        for row in rows.iter_mut() {
            for v in row.iter_mut() {
                *v = center(m, *v);
            }
        }
        for i in 0..cols {
            let mut r = vec![0i64; cols];
            r[i] = m;
            rows.push(r);
        }
        Mat::from_rows(rows, cols)
    }
}
