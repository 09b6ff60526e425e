//! Dense integer linear algebra for the small matrices that show up in
//! polytope computations: column echelon forms with unimodular transforms,
//! integer kernels, saturated lattice bases and affine lattice charts.
//!
//! Intermediate values are carried in `i128`; results are narrowed back to
//! `i64` and overflow is a panic, never a silent wrap.

use num_integer::Integer;

/// An integer vector (exponent vector, lattice point, covector).
pub type IntVec = Vec<i64>;

pub(crate) fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer overflow while narrowing to i64")
}

pub(crate) fn widen(v: &[i64]) -> Vec<i128> {
    v.iter().map(|&x| x as i128).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    narrow(a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum())
}

pub fn sub(a: &[i64], b: &[i64]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// gcd of the absolute values; 0 for the zero vector.
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides by the content. The zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> IntVec {
    let g = content(v);
    if g <= 1 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

fn primitive_wide(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

/// Returns (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Column echelon form `A * U = R` with `U` unimodular. The first `rank`
/// columns of `R` are nonzero with a staircase of positive pivots; the
/// remaining columns are zero.
pub(crate) struct ColumnEchelon {
    pub rank: usize,
    pub reduced: Vec<Vec<i128>>,
    /// `transform[i][j]` is entry (i, j) of `U`.
    pub transform: Vec<Vec<i128>>,
}

pub(crate) fn column_echelon(rows: &[IntVec], n: usize) -> ColumnEchelon {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| widen(r)).collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut piv = 0;
    for r in 0..a.len() {
        if piv == n {
            break;
        }
        for j in piv + 1..n {
            let q = a[r][j];
            if q == 0 {
                continue;
            }
            let p = a[r][piv];
            let (g, x, y) = ext_gcd(p, q);
            let (pg, qg) = (p / g, q / g);
            for mat in [&mut a, &mut u] {
                for row in mat.iter_mut() {
                    let (cp, cj) = (row[piv], row[j]);
                    row[piv] = x * cp + y * cj;
                    row[j] = -qg * cp + pg * cj;
                }
            }
        }
        if a[r][piv] != 0 {
            if a[r][piv] < 0 {
                for mat in [&mut a, &mut u] {
                    for row in mat.iter_mut() {
                        row[piv] = -row[piv];
                    }
                }
            }
            piv += 1;
        }
    }
    ColumnEchelon {
        rank: piv,
        reduced: a,
        transform: u,
    }
}

pub fn rank(rows: &[IntVec], n: usize) -> usize {
    column_echelon(rows, n).rank
}

/// Canonical row Hermite normal form of the lattice spanned by `rows`
/// (zero rows dropped, positive pivots, entries above pivots reduced).
pub fn row_hnf(rows: &[IntVec], n: usize) -> Vec<IntVec> {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| widen(r)).collect();
    let mut out: Vec<Vec<i128>> = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..n {
        // gcd-combine all remaining rows into one pivot row for this column
        let mut pivot: Option<Vec<i128>> = None;
        let mut rest = Vec::new();
        for row in a.drain(..) {
            if row[col] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (g, x, y) = ext_gcd(p[col], row[col]);
                    let (pg, rg) = (p[col] / g, row[col] / g);
                    let new_p: Vec<i128> = p.iter().zip(&row).map(|(a, b)| x * a + y * b).collect();
                    let new_r: Vec<i128> = p.iter().zip(&row).map(|(a, b)| -rg * a + pg * b).collect();
                    rest.push(new_r);
                    pivot = Some(new_p);
                }
            }
        }
        a = rest;
        if let Some(mut p) = pivot {
            if p[col] < 0 {
                p.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(p);
            pivots.push(col);
        }
    }
    for i in 0..out.len() {
        let col = pivots[i];
        let pv = out[i][col];
        for k in 0..i {
            let q = out[k][col].div_euclid(pv);
            if q != 0 {
                let pivot_row = out[i].clone();
                for (x, y) in out[k].iter_mut().zip(&pivot_row) {
                    *x -= q * y;
                }
            }
        }
    }
    out.into_iter()
        .map(|r| r.into_iter().map(narrow).collect())
        .collect()
}

/// A Z-basis of `{x in Z^n : <row, x> = 0 for every row}` in row HNF.
pub fn int_kernel(rows: &[IntVec], n: usize) -> Vec<IntVec> {
    let ech = column_echelon(rows, n);
    let basis: Vec<IntVec> = (ech.rank..n)
        .map(|j| (0..n).map(|i| narrow(ech.transform[i][j])).collect())
        .collect();
    row_hnf(&basis, n)
}

/// A Z-basis of the saturation `span(vectors) ∩ Z^n`, in row HNF.
/// Empty for the zero lattice.
pub fn hermite_basis(vectors: &[IntVec], n: usize) -> Vec<IntVec> {
    if vectors.iter().all(|v| v.iter().all(|&x| x == 0)) {
        return Vec::new();
    }
    int_kernel(&int_kernel(vectors, n), n)
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(m: &[IntVec]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| widen(r)).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Adjugate matrix with `m * adj = det(m) * I`.
pub(crate) fn adjugate(m: &[IntVec]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<IntVec> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let cof = det(&minor);
            // adj[j][i] = (-1)^{i+j} M_ij
            adj[j][i] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    adj
}

pub(crate) fn make_primitive_i128(v: &mut [i128]) {
    primitive_wide(v)
}

/// An affine lattice chart `x = base + Σ c_i basis_i` identifying
/// `Aff ∩ Z^n` with `Z^d`. `basis` is a Z-basis of the saturated
/// direction lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    ambient_dim: usize,
    base: IntVec,
    basis: Vec<IntVec>,
    /// `dual[i] · basis[k] = δ_ik`; used for coordinates and covector lifts.
    dual: Vec<IntVec>,
    /// Z-basis of the covectors vanishing on the direction lattice.
    normals: Vec<IntVec>,
}

impl Chart {
    /// `generators` span the direction space; the chart uses the
    /// saturation of their span.
    pub fn new(base: IntVec, generators: &[IntVec]) -> Self {
        let n = base.len();
        let basis = hermite_basis(generators, n);
        let d = basis.len();
        let ech = column_echelon(&basis, n);
        assert_eq!(ech.rank, d);
        // basis * U = [H | 0]; saturation makes H unimodular and lower
        // triangular with unit diagonal after sign normalisation.
        let h: Vec<Vec<i128>> = (0..d).map(|i| ech.reduced[i][..d].to_vec()).collect();
        for (i, row) in h.iter().enumerate() {
            assert_eq!(row[i], 1, "direction basis is not saturated");
        }
        // inverse of unit lower triangular H
        let mut hinv = vec![vec![0i128; d]; d];
        for j in 0..d {
            hinv[j][j] = 1;
            for i in j + 1..d {
                let s: i128 = (j..i).map(|k| h[i][k] * hinv[k][j]).sum();
                hinv[i][j] = -s;
            }
        }
        let u = &ech.transform;
        let dual: Vec<IntVec> = (0..d)
            .map(|col| {
                (0..n)
                    .map(|row| narrow((0..d).map(|k| u[row][k] * hinv[k][col]).sum()))
                    .collect()
            })
            .collect();
        let normals: Vec<IntVec> = (d..n)
            .map(|col| (0..n).map(|row| narrow(u[row][col])).collect())
            .collect();
        Chart {
            ambient_dim: n,
            base,
            basis,
            dual,
            normals: row_hnf(&normals, n),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn base(&self) -> &[i64] {
        &self.base
    }

    pub fn basis(&self) -> &[IntVec] {
        &self.basis
    }

    /// Covectors cutting out the affine hull: `<e, x> = <e, base>`.
    pub fn normals(&self) -> &[IntVec] {
        &self.normals
    }

    /// Chart coordinates of a lattice point, `None` off the affine hull.
    pub fn to_local(&self, x: &[i64]) -> Option<IntVec> {
        let y = sub(x, &self.base);
        if self.normals.iter().any(|e| dot(e, &y) != 0) {
            return None;
        }
        Some(self.dual.iter().map(|d| dot(d, &y)).collect())
    }

    pub fn to_ambient(&self, c: &[i64]) -> IntVec {
        self.to_ambient_scaled(c, 1)
    }

    /// `m * base + Σ c_i basis_i`, the inverse of the chart on `m * Aff`.
    pub fn to_ambient_scaled(&self, c: &[i64], m: i64) -> IntVec {
        (0..self.ambient_dim)
            .map(|k| {
                let s: i128 = self.base[k] as i128 * m as i128
                    + c.iter()
                        .zip(&self.basis)
                        .map(|(&ci, b)| ci as i128 * b[k] as i128)
                        .sum::<i128>();
                narrow(s)
            })
            .collect()
    }

    /// An ambient integer covector whose restriction to the direction
    /// lattice is `local`.
    pub fn lift_covector(&self, local: &[i64]) -> IntVec {
        (0..self.ambient_dim)
            .map(|k| {
                narrow(
                    local
                        .iter()
                        .zip(&self.dual)
                        .map(|(&a, d)| a as i128 * d[k] as i128)
                        .sum(),
                )
            })
            .collect()
    }

    /// Restriction of an ambient covector to chart coordinates.
    pub fn pull_covector(&self, ambient: &[i64]) -> IntVec {
        self.basis.iter().map(|b| dot(b, ambient)).collect()
    }
}
