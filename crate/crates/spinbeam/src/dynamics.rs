//! Exact unitary evolution in the single-excitation sector.
//!
//! Propagation goes through the full eigendecomposition,
//! `psi(t) = V exp(-i L t) V^T psi(0)`, which is exact up to floating
//! point at these dimensions. Time stepping exists only as an independent
//! test oracle in the test suites. Since `V` is real, one complex
//! evolution costs four real matrix-vector products.

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonian::{EigenSystem, Hamiltonian};

/// Complex amplitude per site over the all-down polarized state; basis
/// state `|j>` is the single spin flip at global site `j`.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: Array1<C64>,
}

impl StateVector {
    pub fn new(amps: Array1<C64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Total occupation probability of a set of sites.
    pub fn occupation(&self, sites: impl IntoIterator<Item = usize>) -> Result<f64> {
        let mut total = 0.0;
        for site in sites {
            if site >= self.dim() {
                return Err(Error::SiteOutOfRange { site, count: self.dim() });
            }
            total += self.amps[site].norm_sqr();
        }
        Ok(total)
    }

    /// `<psi|H|psi>`; real for a symmetric Hamiltonian.
    pub fn energy(&self, h: &Hamiltonian) -> Result<f64> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: h.dim(), got: self.dim() });
        }
        let (re, im) = split(&self.amps);
        let hre = h.matrix().dot(&re);
        let him = h.matrix().dot(&im);
        Ok(re.dot(&hre) + im.dot(&him))
    }
}

fn split(z: &Array1<C64>) -> (Array1<f64>, Array1<f64>) {
    (z.mapv(|v| v.re), z.mapv(|v| v.im))
}

/// Shared eigendecomposition used to evolve many states or instants.
#[derive(Debug, Clone)]
pub struct Propagator {
    eig: EigenSystem,
}

impl Propagator {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        Ok(Self { eig: h.eigensystem()? })
    }

    pub fn from_eigensystem(eig: EigenSystem) -> Self {
        Self { eig }
    }

    pub fn dim(&self) -> usize {
        self.eig.dim()
    }

    pub fn eigensystem(&self) -> &EigenSystem {
        &self.eig
    }

    /// `psi(t) = V exp(-i L t) V^T psi0`.
    pub fn evolve(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        let mut out = self.evolve_series(psi0, &[t])?;
        Ok(out.pop().expect("one requested instant"))
    }

    /// Evolve to each instant of an ascending time grid, reusing one
    /// mode-space projection of `psi0`.
    pub fn evolve_series(&self, psi0: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
        if times.is_empty() {
            return Err(Error::InvalidParameter("empty time grid".into()));
        }
        if times.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("time grid must be ascending".into()));
        }
        if psi0.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: psi0.dim() });
        }

        let v = self.eig.vectors();
        let lambda = self.eig.values();
        let (re, im) = split(&psi0.amps);
        let cr = v.t().dot(&re);
        let ci = v.t().dot(&im);

        let n = self.dim();
        let mut out = Vec::with_capacity(times.len());
        let mut dr = Array1::zeros(n);
        let mut di = Array1::zeros(n);
        for &t in times {
            for k in 0..n {
                let (s, c) = (lambda[k] * t).sin_cos();
                // (cr + i ci) * (cos - i sin)
                dr[k] = cr[k] * c + ci[k] * s;
                di[k] = ci[k] * c - cr[k] * s;
            }
            let or = v.dot(&dr);
            let oi = v.dot(&di);
            let amps = Array1::from_iter(or.iter().zip(oi.iter()).map(|(&a, &b)| C64::new(a, b)));
            out.push(StateVector::new(amps));
        }
        Ok(out)
    }
}

/// One-shot convenience: decompose `h` and evolve a single state.
pub fn evolve(h: &Hamiltonian, psi0: &StateVector, t: f64) -> Result<StateVector> {
    Propagator::new(h)?.evolve(psi0, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::SpinNetwork;
    use crate::tol;
    use ndarray::array;

    fn site_state(dim: usize, site: usize) -> StateVector {
        let mut amps = Array1::from_elem(dim, C64::new(0.0, 0.0));
        amps[site] = C64::new(1.0, 0.0);
        StateVector::new(amps)
    }

    fn max_amp_diff(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes().iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn two_site_h() -> Hamiltonian {
        Hamiltonian::new(array![[0.0, 1.0], [1.0, 0.0]]).unwrap()
    }

    #[test]
    fn evolve_at_zero_is_identity() {
        let h = two_site_h();
        let psi = site_state(2, 0);
        let out = evolve(&h, &psi, 0.0).unwrap();
        assert!(max_amp_diff(&psi, &out) < 1e-14);
    }

    #[test]
    fn two_site_rabi_oscillation() {
        // |<2|psi(t)>|^2 = sin^2 t for the two-site chain.
        let h = two_site_h();
        let prop = Propagator::new(&h).unwrap();
        let psi = site_state(2, 0);
        for t in [std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2, 1.3] {
            let p = prop.evolve(&psi, t).unwrap().occupation([1]).unwrap();
            assert!((p - t.sin().powi(2)).abs() < tol::SPECTRAL, "t={t}");
        }
    }

    #[test]
    fn group_property() {
        let net = SpinNetwork::ybeam(4, 4, 4, 1.0, 1.0, 1.0, 0.5, 0.5).unwrap();
        let h = Hamiltonian::from_network(&net).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let psi = site_state(h.dim(), 1);
        let (t1, t2) = (1.7, 2.9);
        let once = prop.evolve(&psi, t1 + t2).unwrap();
        let twice = prop.evolve(&prop.evolve(&psi, t1).unwrap(), t2).unwrap();
        assert!(max_amp_diff(&once, &twice) < tol::SPECTRAL);
    }

    #[test]
    fn time_reversal() {
        let net = SpinNetwork::star(3, 3, 3, 1.0, 0.6).unwrap();
        let h = Hamiltonian::from_network(&net).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let psi = site_state(h.dim(), 0);
        let there = prop.evolve(&psi, 4.2).unwrap();
        let back = prop.evolve(&there, -4.2).unwrap();
        assert!(max_amp_diff(&psi, &back) < 1e-9);
    }

    #[test]
    fn series_matches_repeated_evolve() {
        let net = SpinNetwork::star(2, 3, 3, 1.0, 0.7).unwrap();
        let h = Hamiltonian::from_network(&net).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let psi = site_state(h.dim(), 2);
        let times = [0.0, 0.5, 1.25, 3.0];
        let series = prop.evolve_series(&psi, &times).unwrap();
        for (k, &t) in times.iter().enumerate() {
            let single = prop.evolve(&psi, t).unwrap();
            assert!(max_amp_diff(&series[k], &single) < tol::ALGEBRAIC);
        }

        let singleton = prop.evolve_series(&psi, &[0.0]).unwrap();
        assert!(max_amp_diff(&singleton[0], &psi) < 1e-14);
    }

    #[test]
    fn unsorted_times_rejected() {
        let h = two_site_h();
        let prop = Propagator::new(&h).unwrap();
        let psi = site_state(2, 0);
        assert!(prop.evolve_series(&psi, &[1.0, 0.5]).is_err());
        assert!(prop.evolve_series(&psi, &[]).is_err());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let h = two_site_h();
        let prop = Propagator::new(&h).unwrap();
        let psi = site_state(3, 0);
        assert!(matches!(
            prop.evolve(&psi, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn occupation_edge_cases() {
        let psi = site_state(4, 1);
        assert_eq!(psi.occupation([]).unwrap(), 0.0);
        assert!((psi.occupation(0..4).unwrap() - 1.0).abs() < 1e-15);
        assert!(psi.occupation([4]).is_err());
    }

    #[test]
    fn energy_is_conserved() {
        let net = SpinNetwork::ybeam(5, 5, 5, 1.0, 1.0, 1.0, 0.4, 0.9).unwrap();
        let h = Hamiltonian::from_network(&net).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let mut amps = Array1::from_elem(h.dim(), C64::new(0.0, 0.0));
        amps[0] = C64::new(0.6, 0.0);
        amps[3] = C64::new(0.0, 0.8);
        let psi = StateVector::new(amps);
        let e0 = psi.energy(&h).unwrap();
        for t in [0.7, 3.1, 11.0] {
            let e = prop.evolve(&psi, t).unwrap().energy(&h).unwrap();
            assert!((e - e0).abs() <= 1e-9 * e0.abs().max(1.0), "t={t}: {e} vs {e0}");
        }
    }
}
