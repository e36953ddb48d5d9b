use crate::error::{Error, Result};

/// The cube Λ_L = {n ∈ ℤ^d : |n_i| ≤ L} with lexicographic site order.
///
/// Site `(n_1, …, n_d)` has index `Σ (n_i + L)(2L+1)^{d-i}`, so the first
/// coordinate is the most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cube {
    dim: usize,
    half_width: usize,
    side: usize,
    len: usize,
}

impl Cube {
    pub fn new(dim: usize, half_width: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dimension d must be at least 1".into()));
        }
        if half_width == 0 {
            return Err(Error::Config("half side length L must be at least 1".into()));
        }
        let side = half_width
            .checked_mul(2)
            .and_then(|s| s.checked_add(1))
            .ok_or_else(|| Error::Config("side length overflows".into()))?;
        let len = u32::try_from(dim)
            .ok()
            .and_then(|d| side.checked_pow(d))
            .ok_or_else(|| Error::Config(format!("cube with d={dim}, L={half_width} exceeds addressable size")))?;
        Ok(Cube {
            dim,
            half_width,
            side,
            len,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// 2L + 1.
    pub fn side(&self) -> usize {
        self.side
    }

    /// Number of sites, (2L+1)^d.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Index offset between neighbours along `axis` (0-based).
    pub fn stride(&self, axis: usize) -> usize {
        self.side.pow((self.dim - 1 - axis) as u32)
    }

    pub fn index_of(&self, site: &[i64]) -> Option<usize> {
        if site.len() != self.dim {
            return None;
        }
        let l = self.half_width as i64;
        let mut index = 0usize;
        for &n in site {
            if n < -l || n > l {
                return None;
            }
            index = index * self.side + (n + l) as usize;
        }
        Some(index)
    }

    pub fn site(&self, mut index: usize) -> Vec<i64> {
        assert!(index < self.len, "site index {index} out of range");
        let l = self.half_width as i64;
        let mut site = vec![0i64; self.dim];
        for slot in site.iter_mut().rev() {
            *slot = (index % self.side) as i64 - l;
            index /= self.side;
        }
        site
    }

    /// All sites in lexicographic order.
    pub fn sites(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(self.len);
        self.for_each_site(|_, s| out.push(s.to_vec()));
        out
    }

    /// Visit every site in index order without allocating per site.
    pub fn for_each_site<F: FnMut(usize, &[i64])>(&self, mut visit: F) {
        let l = self.half_width as i64;
        let mut site = vec![-l; self.dim];
        for index in 0..self.len {
            visit(index, &site);
            for slot in site.iter_mut().rev() {
                if *slot < l {
                    *slot += 1;
                    break;
                }
                *slot = -l;
            }
        }
    }
}
