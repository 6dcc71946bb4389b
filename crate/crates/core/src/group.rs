//! The driving measure `mu`, i.i.d. words sampled from it, moments, and the
//! proximality certificate.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalue_moduli, SquareMatrix};
use crate::rng::{stream_rng, StreamRng};

/// Relative gap between the top two eigenvalue moduli for a proximal witness.
pub const EIG_GAP_TOL: f64 = 1e-6;

/// Raw (unrenormalized) products are only handed out up to this length.
pub const RAW_PRODUCT_LIMIT: usize = 64;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Finitely supported probability measure on `GL(d, R)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMeasure {
    atoms: Vec<SquareMatrix>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl GeneratorMeasure {
    pub fn new(atoms: Vec<SquareMatrix>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("measure needs at least one atom".into()));
        }
        if atoms.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        let d = atoms[0].dim();
        for (i, g) in atoms.iter().enumerate() {
            if g.dim() != d {
                return Err(Error::InvalidMeasure(format!("atom {i} has dimension {} != {d}", g.dim())));
            }
            g.require_invertible()
                .map_err(|e| Error::InvalidMeasure(format!("atom {i}: {e}")))?;
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidMeasure(format!("weight {w} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Ok(Self { atoms, weights, cumulative })
    }

    /// Equal weights on the given atoms.
    pub fn uniform(atoms: Vec<SquareMatrix>) -> Result<Self> {
        let k = atoms.len().max(1);
        Self::new(atoms, vec![1.0 / k as f64; k])
    }

    pub fn dirac(g: SquareMatrix) -> Result<Self> {
        Self::new(vec![g], vec![1.0])
    }

    pub fn atoms(&self) -> &[SquareMatrix] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].dim()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Inverse-CDF atom selection for `u` in `[0, 1)`, in the fixed atom order.
    pub fn index_for(&self, u: f64) -> usize {
        self.cumulative.iter().position(|&c| u < c).unwrap_or(self.atoms.len() - 1)
    }

    /// Same weights on different atoms (e.g. the image under a representation).
    pub fn map_atoms<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&SquareMatrix) -> Result<SquareMatrix>,
    {
        let atoms = self.atoms.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Self::new(atoms, self.weights.clone())
    }
}

/// `N(g) = max(|g|, |g^{-1}|)`.
pub fn big_n(g: &SquareMatrix) -> Result<f64> {
    g.require_invertible()?;
    let s = g.singular_values();
    Ok(s[0].max(1.0 / s[g.dim() - 1]))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentReport {
    pub p: f64,
    pub value: f64,
}

/// `sum_i w_i (log N(g_i))^p`.
pub fn moment(mu: &GeneratorMeasure, p: f64) -> Result<MomentReport> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("moment order p = {p} must be >= 1")));
    }
    let mut value = 0.0;
    for (g, w) in mu.atoms.iter().zip(&mu.weights) {
        value += w * big_n(g)?.ln().powf(p);
    }
    Ok(MomentReport { p, value })
}

/// The image of `mu` under `g -> g^{-1}`.
pub fn check_mu(mu: &GeneratorMeasure) -> GeneratorMeasure {
    mu.map_atoms(|g| g.inverse()).expect("inverses of group elements are group elements")
}

/// A word whose product has a simple dominant eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct ProximalCertificate {
    /// Atom indices; the product is `atoms[word[0]] * atoms[word[1]] * ...`.
    pub word: Vec<usize>,
    pub product: SquareMatrix,
    pub moduli: Vec<f64>,
}

/// Breadth-first search over words of length `<= max_len`. `None` is
/// inconclusive: it does not show that the semigroup is not proximal.
pub fn proximality_certificate(mu: &GeneratorMeasure, max_len: usize) -> Option<ProximalCertificate> {
    let k = mu.len();
    let mut frontier: Vec<(Vec<usize>, SquareMatrix)> = vec![(Vec::new(), SquareMatrix::identity(mu.dim()))];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * k);
        for (word, product) in &frontier {
            for (i, g) in mu.atoms.iter().enumerate() {
                let mut w = word.clone();
                w.push(i);
                let p = product.mul(g);
                let moduli = eigenvalue_moduli(&p);
                let proximal = match moduli.as_slice() {
                    [_] => true,
                    [m1, m2, ..] => *m1 > 0.0 && (m1 - m2) / m1 > EIG_GAP_TOL,
                    [] => false,
                };
                if proximal {
                    return Some(ProximalCertificate { word: w, product: p, moduli });
                }
                next.push((w, p));
            }
        }
        frontier = next;
    }
    None
}

/// Addresses one reproducible i.i.d. sequence `b_1, b_2, ...` of `mu`.
#[derive(Clone, Copy, Debug)]
pub struct WalkSampler<'a> {
    pub measure: &'a GeneratorMeasure,
    pub master_seed: u64,
    pub stream_index: u64,
}

impl<'a> WalkSampler<'a> {
    pub fn new(measure: &'a GeneratorMeasure, master_seed: u64, stream_index: u64) -> Self {
        Self { measure, master_seed, stream_index }
    }

    /// A fresh stream positioned at `b_1`.
    pub fn stream(&self) -> WalkStream<'a> {
        WalkStream { measure: self.measure, rng: stream_rng(self.master_seed, self.stream_index) }
    }

    /// The first `n` steps of this sampler's sequence.
    pub fn sample_word(&self, n: usize) -> SampledWord {
        self.stream().word(n)
    }
}

/// A positioned i.i.d. stream of atom indices.
pub struct WalkStream<'a> {
    measure: &'a GeneratorMeasure,
    rng: StreamRng,
}

impl<'a> WalkStream<'a> {
    pub fn measure(&self) -> &'a GeneratorMeasure {
        self.measure
    }

    #[inline]
    pub fn next_index(&mut self) -> usize {
        let u: f64 = self.rng.random();
        self.measure.index_for(u)
    }

    #[inline]
    pub fn next_atom(&mut self) -> &'a SquareMatrix {
        let measure = self.measure;
        &measure.atoms[self.next_index()]
    }

    /// The next `n` steps as a word and its renormalized product.
    pub fn word(&mut self, n: usize) -> SampledWord {
        let mut indices = Vec::with_capacity(n);
        let mut product = SquareMatrix::identity(self.measure.dim());
        let mut log_scale = 0.0;
        for _ in 0..n {
            let i = self.next_index();
            indices.push(i);
            let p = self.measure.atoms[i].mul(&product);
            let s = p.frobenius_norm();
            log_scale += s.ln();
            product = p.scale(1.0 / s);
        }
        SampledWord { indices, product, log_scale }
    }
}

/// `b_n ... b_1 = exp(log_scale) * product`, with `product` of unit Frobenius
/// norm after each step.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledWord {
    pub indices: Vec<usize>,
    pub product: SquareMatrix,
    pub log_scale: f64,
}

impl SampledWord {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The unrenormalized product; refused for long words.
    pub fn raw_product(&self) -> Result<SquareMatrix> {
        if self.len() > RAW_PRODUCT_LIMIT {
            return Err(Error::RawProductLimit { steps: self.len(), limit: RAW_PRODUCT_LIMIT });
        }
        Ok(self.product.scale(self.log_scale.exp()))
    }
}
