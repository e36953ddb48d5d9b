use super::{Cube, SiteField};
use crate::error::{Error, Result};

/// Symmetric matrix with `bandwidth` stored sub-diagonals.
///
/// Storage is row-wise over the lower band: row `i` holds
/// `M[i][i-b..=i]` contiguously (slots left of column 0 are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymmetricMatrix {
    order: usize,
    bandwidth: usize,
    data: Vec<f64>,
}

impl BandedSymmetricMatrix {
    pub fn zeros(order: usize, bandwidth: usize) -> Self {
        let bandwidth = bandwidth.min(order.saturating_sub(1));
        BandedSymmetricMatrix {
            order,
            bandwidth,
            data: vec![0.0; order * (bandwidth + 1)],
        }
    }

    /// Lower band of a dense row-major matrix; entries outside the band are
    /// ignored. Symmetry of the input is the caller's responsibility.
    pub fn from_dense(order: usize, dense: &[f64], bandwidth: usize) -> Result<Self> {
        if dense.len() != order * order {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {order}×{order} matrix",
                dense.len()
            )));
        }
        let mut m = Self::zeros(order, bandwidth);
        for i in 0..order {
            for j in i.saturating_sub(m.bandwidth)..=i {
                m.set(i, j, dense[i * order + j]);
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        if hi - lo > self.bandwidth {
            None
        } else {
            Some(hi * (self.bandwidth + 1) + self.bandwidth - (hi - lo))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Sets both `(i, j)` and `(j, i)`. Panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("({i}, {j}) outside bandwidth {}", self.bandwidth));
        self.data[k] = value;
    }

    /// Row `i` of the lower band, `M[i][i-b..=i]`, padded with zeros.
    pub fn lower_row(&self, i: usize) -> &[f64] {
        let w = self.bandwidth + 1;
        &self.data[i * w..(i + 1) * w]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        crate::quad::pairwise_sum_by(self.order, |i| self.get(i, i))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0f64; self.order];
        for i in 0..self.order {
            for j in i.saturating_sub(self.bandwidth)..=i {
                let a = self.get(i, j).abs();
                rows[i] += a;
                if j != i {
                    rows[j] += a;
                }
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.order;
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            for j in i.saturating_sub(self.bandwidth)..=i {
                let v = self.get(i, j);
                dense[i * n + j] = v;
                dense[j * n + i] = v;
            }
        }
        dense
    }

    pub fn check_finite(&self) -> Result<()> {
        for i in 0..self.order {
            for j in i.saturating_sub(self.bandwidth)..=i {
                if !self.get(i, j).is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// factor · (M − shift·I).
    pub fn shifted_scaled(&self, factor: f64, shift: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.order {
            let d = self.get(i, i);
            out.set(i, i, d - shift);
        }
        for v in &mut out.data {
            *v *= factor;
        }
        out
    }
}

/// The affine map M ↦ factor·(M − energy·I).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rescale {
    pub energy: f64,
    pub factor: f64,
}

impl Rescale {
    /// The local rescaling (L+1)(M − E) around energy E.
    pub fn local(cube: &Cube, energy: f64) -> Self {
        Rescale {
            energy,
            factor: (cube.half_width() + 1) as f64,
        }
    }
}

/// Δ_L (+ diag v) restricted to the cube with Dirichlet boundary, optionally
/// rescaled. Bandwidth is (2L+1)^{d-1}.
pub fn assemble_hamiltonian(
    cube: &Cube,
    field: Option<&SiteField>,
    rescale: Option<Rescale>,
) -> Result<BandedSymmetricMatrix> {
    if let Some(f) = field {
        if f.cube() != cube {
            return Err(Error::DimensionMismatch(format!(
                "field on cube d={}, L={} but Hamiltonian on d={}, L={}",
                f.cube().dim(),
                f.cube().half_width(),
                cube.dim(),
                cube.half_width()
            )));
        }
    }
    let (scale, shift) = rescale.map_or((1.0, 0.0), |r| (r.factor, r.energy));
    let bandwidth = cube.stride(0);
    let mut m = BandedSymmetricMatrix::zeros(cube.len(), bandwidth);
    let l = cube.half_width() as i64;
    let strides: Vec<usize> = (0..cube.dim()).map(|a| cube.stride(a)).collect();
    cube.for_each_site(|i, site| {
        let v = field.map_or(0.0, |f| f.potential()[i]);
        m.set(i, i, scale * (v - shift));
        for (axis, &n) in site.iter().enumerate() {
            if n > -l {
                m.set(i, i - strides[axis], scale);
            }
        }
    });
    Ok(m)
}
