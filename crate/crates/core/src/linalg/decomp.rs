use crate::error::{Error, Result};
use crate::linalg::matrix::SquareMatrix;
use crate::linalg::points::{DualProjectivePoint, ProjectivePoint};

/// Density points need `first_gap <= 1 - GAP_TOL`.
pub const GAP_TOL: f64 = 1e-9;

/// Largest singular value.
pub fn operator_norm(g: &SquareMatrix) -> f64 {
    g.singular_values()[0]
}

fn pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect()
}

/// Action of `g` on the second exterior power, lexicographic basis `e_i ^ e_j`, `i < j`.
pub fn exterior_square(g: &SquareMatrix) -> Result<SquareMatrix> {
    let d = g.dim();
    if d < 2 {
        return Err(Error::Dimension("exterior square needs dimension >= 2".into()));
    }
    let idx = pairs(d);
    let m = idx.len();
    let mut data = Vec::with_capacity(m * m);
    for &(i, j) in &idx {
        for &(k, l) in &idx {
            data.push(g.get(i, k) * g.get(j, l) - g.get(i, l) * g.get(j, k));
        }
    }
    SquareMatrix::new(m, data)
}

fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, k, &mut Vec::new(), &mut out);
    out
}

/// Action of `g` on the `k`-th exterior power (lexicographic basis of minors).
pub fn exterior_power(g: &SquareMatrix, k: usize) -> Result<SquareMatrix> {
    let d = g.dim();
    if k == 0 || k > d {
        return Err(Error::Dimension(format!("exterior power {k} of a dimension {d} space")));
    }
    let idx = subsets(d, k);
    let m = idx.len();
    let mut data = Vec::with_capacity(m * m);
    for rows in &idx {
        for cols in &idx {
            let minor = nalgebra::DMatrix::from_fn(k, k, |a, b| g.get(rows[a], cols[b]));
            data.push(minor.determinant());
        }
    }
    SquareMatrix::new(m, data)
}

/// `g = k diag(a) l` with `k, l` orthogonal and `a` nonincreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanTriple {
    pub k: SquareMatrix,
    pub a: Vec<f64>,
    pub l: SquareMatrix,
}

impl CartanTriple {
    pub fn reconstruct(&self) -> SquareMatrix {
        self.k.mul(&SquareMatrix::diag(&self.a)).mul(&self.l)
    }
}

/// Cartan (singular value) decomposition with a deterministic sign convention:
/// each left singular vector has its first non-negligible entry positive.
pub fn cartan(g: &SquareMatrix) -> Result<CartanTriple> {
    g.require_invertible()?;
    let d = g.dim();
    let svd = g.to_nalgebra().svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));

    let mut k = vec![0.0; d * d];
    let mut l = vec![0.0; d * d];
    let mut a = Vec::with_capacity(d);
    for (col, &src) in order.iter().enumerate() {
        let lead = (0..d).map(|i| u[(i, src)]).find(|c| c.abs() > 1e-12).unwrap_or(1.0);
        let s = if lead < 0.0 { -1.0 } else { 1.0 };
        for i in 0..d {
            k[i * d + col] = s * u[(i, src)];
            l[col * d + i] = s * v_t[(src, i)];
        }
        a.push(svd.singular_values[src]);
    }
    Ok(CartanTriple { k: SquareMatrix::new(d, k)?, a, l: SquareMatrix::new(d, l)? })
}

/// `gamma_1(g) = |^2 g| / |g|^2 = a_2 / a_1`.
pub fn first_gap(g: &SquareMatrix) -> Result<f64> {
    if g.dim() < 2 {
        return Err(Error::Dimension("first gap needs dimension >= 2".into()));
    }
    g.require_invertible()?;
    let s = g.singular_values();
    Ok(s[1] / s[0])
}

/// Attracting point `x^M_g = R k e_1` and repelling covector `y^m_g = R l^T e_1*`.
pub fn density_points(g: &SquareMatrix) -> Result<(ProjectivePoint, DualProjectivePoint)> {
    let gap = first_gap(g)?;
    if gap > 1.0 - GAP_TOL {
        return Err(Error::DegenerateGap { gap });
    }
    let c = cartan(g)?;
    Ok((ProjectivePoint::new(&c.k.column(0))?, DualProjectivePoint::new(c.l.row(0))?))
}

/// Householder QR with the positive-diagonal convention, `a = q r`.
pub fn householder_qr(a: &SquareMatrix) -> (SquareMatrix, SquareMatrix) {
    let d = a.dim();
    let mut r: Vec<f64> = a.as_slice().to_vec();
    let mut q: Vec<f64> = SquareMatrix::identity(d).as_slice().to_vec();
    let mut v = vec![0.0; d];
    for col in 0..d.saturating_sub(1) {
        let alpha_sq: f64 = (col..d).map(|i| r[i * d + col].powi(2)).sum();
        let alpha = alpha_sq.sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = r[col * d + col];
        let beta = if x0 >= 0.0 { -alpha } else { alpha };
        for i in 0..d {
            v[i] = if i < col { 0.0 } else { r[i * d + col] };
        }
        v[col] -= beta;
        let vnorm_sq: f64 = v[col..].iter().map(|x| x * x).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        // r <- (I - 2vv^T/|v|^2) r
        for j in 0..d {
            let s: f64 = (col..d).map(|i| v[i] * r[i * d + j]).sum::<f64>() * 2.0 / vnorm_sq;
            for i in col..d {
                r[i * d + j] -= s * v[i];
            }
        }
        // q <- q (I - 2vv^T/|v|^2)
        for i in 0..d {
            let s: f64 = (col..d).map(|j| q[i * d + j] * v[j]).sum::<f64>() * 2.0 / vnorm_sq;
            for j in col..d {
                q[i * d + j] -= s * v[j];
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            r[i * d + j] = 0.0;
        }
        if r[i * d + i] < 0.0 {
            for j in 0..d {
                r[i * d + j] = -r[i * d + j];
                q[j * d + i] = -q[j * d + i];
            }
        }
    }
    (
        SquareMatrix::new(d, q).expect("finite input gives finite factors"),
        SquareMatrix::new(d, r).expect("finite input gives finite factors"),
    )
}

/// Eigenvalue moduli sorted nonincreasing.
pub fn eigenvalue_moduli(g: &SquareMatrix) -> Vec<f64> {
    let mut m: Vec<f64> = g.to_nalgebra().complex_eigenvalues().iter().map(|z| z.norm()).collect();
    m.sort_by(|a, b| b.total_cmp(a));
    m
}
