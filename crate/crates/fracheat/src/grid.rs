//! Uniform periodic space-time grids and complex sampled fields, with the
//! flat binary interchange format.
//!
//! The grid covers the centered box `[-L_x/2, L_x/2)^n x [-L_t/2, L_t/2)`
//! with periodic identification; sample layout is row-major with the time
//! axis slowest and the last space axis fastest.

use crate::error::{Error, Result};
use crate::field::SpaceTimeField;
use crate::scalar::Real;
use num_complex::Complex;
use std::io::{Read as IoRead, Write as IoWrite};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeGrid<T> {
    pub n: usize,
    pub l_x: T,
    pub l_t: T,
    pub n_x: usize,
    pub n_t: usize,
}

impl<T: Real> SpaceTimeGrid<T> {
    pub fn new(n: usize, l_x: T, l_t: T, n_x: usize, n_t: usize) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidParameter(format!("grid dimension {n} not in 1..=3")));
        }
        for (label, count) in [("N_x", n_x), ("N_t", n_t)] {
            if count < 4 || count % 2 != 0 {
                return Err(Error::InvalidParameter(format!(
                    "{label} = {count} must be even and at least 4"
                )));
            }
        }
        if !(l_x > T::zero() && l_t > T::zero()) {
            return Err(Error::InvalidParameter("grid extents must be positive".into()));
        }
        Ok(SpaceTimeGrid { n, l_x, l_t, n_x, n_t })
    }

    pub fn h_x(&self) -> T {
        self.l_x / T::from_count(self.n_x)
    }

    pub fn h_t(&self) -> T {
        self.l_t / T::from_count(self.n_t)
    }

    pub fn cardinality(&self) -> usize {
        self.n_x.pow(self.n as u32) * self.n_t
    }

    /// Physical coordinate of space index `i` (0-based): `-L_x/2 + i h_x`.
    pub fn x_coord(&self, i: usize) -> T {
        -self.l_x * T::lit(0.5) + self.h_x() * T::from_count(i)
    }

    pub fn t_coord(&self, m: usize) -> T {
        -self.l_t * T::lit(0.5) + self.h_t() * T::from_count(m)
    }

    /// Signed integer mode for a 0-based array index: `0..=N/2` keep their
    /// value, the rest wrap to negative.
    pub fn signed_mode(idx: usize, len: usize) -> i64 {
        if idx <= len / 2 {
            idx as i64
        } else {
            idx as i64 - len as i64
        }
    }

    /// Spatial frequency of array index `k`: `2 pi k_signed / L_x`.
    pub fn xi(&self, k: usize) -> T {
        T::lit(2.0) * T::PI() * T::from_i64(Self::signed_mode(k, self.n_x)).unwrap() / self.l_x
    }

    /// Temporal frequency of array index `m`: `2 pi m_signed / L_t`.
    pub fn rho(&self, m: usize) -> T {
        T::lit(2.0) * T::PI() * T::from_i64(Self::signed_mode(m, self.n_t)).unwrap() / self.l_t
    }

    /// Flat index from time index and space indices (time slowest, last
    /// space axis fastest).
    pub fn flat_index(&self, it: usize, ix: &[usize]) -> usize {
        debug_assert_eq!(ix.len(), self.n);
        let mut idx = it;
        for &i in ix {
            idx = idx * self.n_x + i;
        }
        idx
    }
}

/// Complex samples of a field on a [`SpaceTimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledField<T> {
    pub grid: SpaceTimeGrid<T>,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> SampledField<T> {
    pub fn new(grid: SpaceTimeGrid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.cardinality() {
            return Err(Error::InvalidParameter(format!(
                "value count {} does not match grid cardinality {}",
                values.len(),
                grid.cardinality()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter("sampled values must be finite".into()));
        }
        Ok(SampledField { grid, values })
    }

    pub fn zeros(grid: SpaceTimeGrid<T>) -> Self {
        let len = grid.cardinality();
        SampledField { grid, values: vec![Complex::new(T::zero(), T::zero()); len] }
    }

    /// Sample a real-valued field on the grid.
    pub fn sample<F: SpaceTimeField<T>>(grid: SpaceTimeGrid<T>, field: &F) -> Self {
        Self::from_fn(grid, |x, t| Complex::new(field.value(x, t), T::zero()))
    }

    /// Build from a complex-valued closure of `(x, t)`.
    pub fn from_fn<F: Fn(&[T], T) -> Complex<T>>(grid: SpaceTimeGrid<T>, f: F) -> Self {
        let mut out = Self::zeros(grid);
        let n = grid.n;
        let space_total = grid.n_x.pow(n as u32);
        for it in 0..grid.n_t {
            let t = grid.t_coord(it);
            for sflat in 0..space_total {
                let mut rest = sflat;
                let mut x = [T::zero(); crate::field::MAX_DIM];
                for ax in (0..n).rev() {
                    x[ax] = grid.x_coord(rest % grid.n_x);
                    rest /= grid.n_x;
                }
                out.values[it * space_total + sflat] = f(&x[..n], t);
            }
        }
        out
    }

    /// Mean of all samples.
    pub fn mean(&self) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for v in &self.values {
            acc = acc + *v;
        }
        acc / T::from_count(self.values.len())
    }

    /// Discrete L2 norm (root mean square over samples).
    pub fn l2_norm(&self) -> T {
        let mut acc = T::zero();
        for v in &self.values {
            acc += v.norm_sqr();
        }
        (acc / T::from_count(self.values.len())).sqrt()
    }

    /// Multilinear periodic interpolation of the real part at `(x, t)`.
    pub fn interp_real(&self, x: &[T], t: T) -> T {
        let g = self.grid;
        let n = g.n;
        debug_assert_eq!(x.len(), n);
        let fi = |coord: T, l: T, count: usize| -> (usize, usize, T) {
            let h = l / T::from_count(count);
            let pos = (coord + l * T::lit(0.5)) / h;
            let base = pos.floor();
            let frac = pos - base;
            let b = base.to_f64().unwrap() as i64;
            let c = count as i64;
            let i0 = b.rem_euclid(c) as usize;
            let i1 = (b + 1).rem_euclid(c) as usize;
            (i0, i1, frac)
        };
        let (t0, t1, ft) = fi(t, g.l_t, g.n_t);
        let mut corners = [(0usize, 0usize, T::zero()); crate::field::MAX_DIM];
        for ax in 0..n {
            corners[ax] = fi(x[ax], g.l_x, g.n_x);
        }
        let space_total = g.n_x.pow(n as u32);
        let mut acc = T::zero();
        for mask in 0..(1usize << (n + 1)) {
            let (it, wt) = if mask & 1 == 0 { (t0, T::one() - ft) } else { (t1, ft) };
            let mut sflat = 0usize;
            let mut w = wt;
            for ax in 0..n {
                let (i0, i1, f) = corners[ax];
                let (i, wi) = if mask & (1 << (ax + 1)) == 0 {
                    (i0, T::one() - f)
                } else {
                    (i1, f)
                };
                sflat = sflat * g.n_x + i;
                w = w * wi;
            }
            acc += w * self.values[it * space_total + sflat].re;
        }
        acc
    }

    /// Serialize to the flat binary layout: header `n, N_x, N_t` as
    /// little-endian `u64`, `L_x, L_t` as little-endian `f64`, then
    /// interleaved re/im `f64` pairs in row-major order, time axis slowest.
    pub fn write_to<W: IoWrite>(&self, w: &mut W) -> Result<()> {
        let g = &self.grid;
        w.write_all(&(g.n as u64).to_le_bytes())?;
        w.write_all(&(g.n_x as u64).to_le_bytes())?;
        w.write_all(&(g.n_t as u64).to_le_bytes())?;
        w.write_all(&g.l_x.to_f64().unwrap().to_le_bytes())?;
        w.write_all(&g.l_t.to_f64().unwrap().to_le_bytes())?;
        for v in &self.values {
            w.write_all(&v.re.to_f64().unwrap().to_le_bytes())?;
            w.write_all(&v.im.to_f64().unwrap().to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: IoRead>(r: &mut R) -> Result<Self> {
        let mut buf8 = [0u8; 8];
        let mut read_u64 = |r: &mut R| -> Result<u64> {
            r.read_exact(&mut buf8)?;
            Ok(u64::from_le_bytes(buf8))
        };
        let n = read_u64(r)? as usize;
        let n_x = read_u64(r)? as usize;
        let n_t = read_u64(r)? as usize;
        let mut fbuf = [0u8; 8];
        let mut read_f64 = |r: &mut R| -> Result<f64> {
            r.read_exact(&mut fbuf)?;
            Ok(f64::from_le_bytes(fbuf))
        };
        let l_x = T::lit(read_f64(r)?);
        let l_t = T::lit(read_f64(r)?);
        let grid = SpaceTimeGrid::new(n, l_x, l_t, n_x, n_t)?;
        let mut values = Vec::with_capacity(grid.cardinality());
        let mut buf = [0u8; 16];
        for _ in 0..grid.cardinality() {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf[..8].try_into().unwrap());
            let im = f64::from_le_bytes(buf[8..].try_into().unwrap());
            values.push(Complex::new(T::lit(re), T::lit(im)));
        }
        SampledField::new(grid, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::AnalyticField;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn grid_invariants_enforced() {
        assert!(SpaceTimeGrid::<f64>::new(1, 10.0, 10.0, 8, 8).is_ok());
        assert!(SpaceTimeGrid::<f64>::new(1, 10.0, 10.0, 7, 8).is_err());
        assert!(SpaceTimeGrid::<f64>::new(1, 10.0, 10.0, 2, 8).is_err());
        assert!(SpaceTimeGrid::<f64>::new(1, -1.0, 10.0, 8, 8).is_err());
        assert!(SpaceTimeGrid::<f64>::new(4, 10.0, 10.0, 8, 8).is_err());
    }

    #[test]
    fn frequencies_and_coords() {
        let g = SpaceTimeGrid::<f64>::new(1, 2.0 * std::f64::consts::PI, 8.0, 8, 8).unwrap();
        assert_relative_eq!(g.xi(1), 1.0);
        assert_relative_eq!(g.xi(7), -1.0);
        assert_relative_eq!(g.xi(4), 4.0); // nyquist keeps the positive sign
        assert_relative_eq!(g.x_coord(4), 0.0, epsilon = 1e-14);
        assert_relative_eq!(g.rho(0), 0.0);
    }

    #[test]
    fn sample_count_matches_cardinality() {
        let g = SpaceTimeGrid::<f64>::new(2, 4.0, 4.0, 6, 4).unwrap();
        let f = SampledField::sample(g, &AnalyticField::<f64>::gaussian(1.0));
        assert_eq!(f.values.len(), 6 * 6 * 4);
        assert!(SampledField::new(g, vec![Complex::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn interpolation_reproduces_grid_values() {
        let g = SpaceTimeGrid::<f64>::new(1, 8.0, 8.0, 16, 16).unwrap();
        let f = SampledField::sample(g, &AnalyticField::<f64>::gaussian(0.5));
        let x = g.x_coord(5);
        let t = g.t_coord(9);
        assert_relative_eq!(
            f.interp_real(&[x], t),
            (-0.5 * (x * x + t * t)).exp(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn binary_header_layout_is_pinned() {
        let g = SpaceTimeGrid::<f64>::new(1, 2.0, 4.0, 4, 4).unwrap();
        let f = SampledField::zeros(g);
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 40 + 16 * 16);
        assert_eq!(&buf[0..8], &1u64.to_le_bytes());
        assert_eq!(&buf[8..16], &4u64.to_le_bytes());
        assert_eq!(&buf[16..24], &4u64.to_le_bytes());
        assert_eq!(&buf[24..32], &2.0f64.to_le_bytes());
        assert_eq!(&buf[32..40], &4.0f64.to_le_bytes());
    }

    proptest! {
        #[test]
        fn binary_roundtrip(seed in 0u64..1000) {
            let g = SpaceTimeGrid::<f64>::new(1, 5.0, 3.0, 6, 4).unwrap();
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            let values: Vec<Complex<f64>> =
                (0..g.cardinality()).map(|_| Complex::new(next(), next())).collect();
            let f = SampledField::new(g, values).unwrap();
            let mut buf = Vec::new();
            f.write_to(&mut buf).unwrap();
            let back = SampledField::<f64>::read_from(&mut buf.as_slice()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
