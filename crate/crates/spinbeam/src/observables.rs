//! Figure-of-merit observables: reflection factor, per-leg transmission,
//! two-leg concurrence and interference intensity.

use serde::Serialize;

use crate::dynamics::{Propagator, StateVector};
use crate::error::{Error, Result};
use crate::network::SpinNetwork;

/// Probability left in the input-leg interior `D' = [1, M-1]` at `t0`.
#[derive(Debug, Clone, Serialize)]
pub struct ReflectionResult {
    pub reflection: f64,
    pub t0: f64,
    /// Global site ids of `D'`.
    pub domain: std::ops::Range<usize>,
}

/// Reflection factor `R(t0) = sum_{j in D'} |<j| psi(t0)>|^2` where `D'`
/// is the input leg without its node-adjacent last site.
pub fn reflection_factor(
    network: &SpinNetwork,
    prop: &Propagator,
    psi0: &StateVector,
    t0: f64,
) -> Result<ReflectionResult> {
    if t0 < 0.0 {
        return Err(Error::InvalidParameter(format!("t0 must be >= 0, got {t0}")));
    }
    let input = network
        .input_leg()
        .ok_or_else(|| Error::UnsupportedTopology("no input leg identified".into()))?;
    let sites = network.leg_sites(input)?;
    let domain = sites.start..sites.end.saturating_sub(1);
    let evolved = prop.evolve(psi0, t0)?;
    Ok(ReflectionResult { reflection: evolved.occupation(domain.clone())?, t0, domain })
}

/// Occupation of one whole leg at `t0`.
pub fn leg_transmission(
    network: &SpinNetwork,
    prop: &Propagator,
    psi0: &StateVector,
    t0: f64,
    leg: &str,
) -> Result<f64> {
    let sites = network.leg_sites(leg)?;
    prop.evolve(psi0, t0)?.occupation(sites)
}

/// Single-excitation concurrence between legs `B` and `C` over the window
/// `D = [N - W, N]` at the leg ends (`W` rounded to the nearest site):
/// `C = sum_{i in D} 2 |Re(conj(psi_B,i) psi_C,i)|`.
pub fn concurrence(network: &SpinNetwork, psi: &StateVector, window: f64) -> Result<f64> {
    let leg_b = network.leg("B").ok_or_else(|| Error::UnknownLeg("B".into()))?;
    let leg_c = network.leg("C").ok_or_else(|| Error::UnknownLeg("C".into()))?;
    if leg_b.length != leg_c.length {
        return Err(Error::UnsupportedTopology(
            "concurrence window needs legs B and C of equal length".into(),
        ));
    }
    if !(window >= 0.0) || !window.is_finite() {
        return Err(Error::InvalidParameter(format!("window must be >= 0, got {window}")));
    }
    let n = leg_b.length;
    let w = window.round() as usize;
    let lo = n.saturating_sub(w).max(1);

    let amps = psi.amplitudes();
    if amps.len() != network.site_count() {
        return Err(Error::DimensionMismatch {
            expected: network.site_count(),
            got: amps.len(),
        });
    }
    let mut total = 0.0;
    for i in lo..=n {
        let b = amps[network.site_index("B", i)?];
        let c = amps[network.site_index("C", i)?];
        total += 2.0 * (b.conj() * c).re.abs();
    }
    Ok(total)
}

/// Concurrence maximized over a time grid.
#[derive(Debug, Clone, Serialize)]
pub struct ConcurrenceResult {
    /// `(t, C(t))` samples in grid order.
    pub samples: Vec<(f64, f64)>,
    pub c_max: f64,
    /// Instant attaining `c_max`.
    pub t_star: f64,
    /// Window width used (pre-rounding).
    pub window: f64,
}

/// Evaluate `C(t)` on an ascending time grid from one shared
/// decomposition and return the maximum.
pub fn max_concurrence(
    network: &SpinNetwork,
    prop: &Propagator,
    psi0: &StateVector,
    times: &[f64],
    window: f64,
) -> Result<ConcurrenceResult> {
    let states = prop.evolve_series(psi0, times)?;
    let mut samples = Vec::with_capacity(times.len());
    let mut c_max = f64::NEG_INFINITY;
    let mut t_star = times[0];
    for (&t, state) in times.iter().zip(&states) {
        let c = concurrence(network, state, window)?;
        if c > c_max {
            c_max = c;
            t_star = t;
        }
        samples.push((t, c));
    }
    Ok(ConcurrenceResult { samples, c_max, t_star, window })
}

/// One point of an interference pattern: `|<r0| psi(t0)>|^2` labeled by
/// the path difference of the device that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct InterferenceResult {
    pub delta: i64,
    pub intensity: f64,
    pub site: usize,
    pub t0: f64,
}

/// Single-site intensity `|<site| psi(t0)>|^2`.
pub fn interference_intensity(
    prop: &Propagator,
    psi0: &StateVector,
    site: usize,
    t0: f64,
) -> Result<f64> {
    if site >= prop.dim() {
        return Err(Error::SiteOutOfRange { site, count: prop.dim() });
    }
    Ok(prop.evolve(psi0, t0)?.amplitudes()[site].norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Hamiltonian;
    use crate::timing;
    use crate::tol;
    use crate::wavepacket::{gaussian_packet, packet_width, GaussianPacketSpec};
    use ndarray::Array1;
    use num_complex::Complex64 as C64;
    use std::f64::consts::FRAC_1_SQRT_2 as S2;

    fn matched_ybeam() -> (SpinNetwork, Propagator, StateVector) {
        let net = SpinNetwork::ybeam(50, 50, 50, 1.0, 1.0, 1.0, S2, S2).unwrap();
        let h = Hamiltonian::from_network(&net).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let psi = gaussian_packet(&net, &GaussianPacketSpec::new("A", 25.0, 0.3)).unwrap();
        (net, prop, psi)
    }

    #[test]
    fn initial_packet_is_fully_reflected_domain() {
        let (net, prop, psi) = matched_ybeam();
        let r = reflection_factor(&net, &prop, &psi, 0.0).unwrap();
        assert!(r.reflection > 0.999);
        assert_eq!(r.domain, 0..49);
    }

    #[test]
    fn negative_t0_rejected() {
        let (net, prop, psi) = matched_ybeam();
        assert!(reflection_factor(&net, &prop, &psi, -1.0).is_err());
    }

    #[test]
    fn matched_beam_reflection_vanishes_and_splits_evenly() {
        let (net, prop, psi) = matched_ybeam();
        let t0 = timing::reflection_instant(50, 25.0, 50, 1.0);
        let r = reflection_factor(&net, &prop, &psi, t0).unwrap();
        assert!(r.reflection < 0.01, "R = {}", r.reflection);
        let tb = leg_transmission(&net, &prop, &psi, t0, "B").unwrap();
        let tc = leg_transmission(&net, &prop, &psi, t0, "C").unwrap();
        assert!((tb - 0.5).abs() < 0.02);
        assert!((tc - 0.5).abs() < 0.02);
    }

    #[test]
    fn completeness_of_site_partition() {
        let (net, prop, psi) = matched_ybeam();
        let t0 = 18.0;
        let r = reflection_factor(&net, &prop, &psi, t0).unwrap().reflection;
        let tb = leg_transmission(&net, &prop, &psi, t0, "B").unwrap();
        let tc = leg_transmission(&net, &prop, &psi, t0, "C").unwrap();
        let node_site = net.site_index("A", 50).unwrap();
        let residual = prop.evolve(&psi, t0).unwrap().occupation([node_site]).unwrap();
        assert!((r + tb + tc + residual - 1.0).abs() < tol::SPECTRAL);
    }

    #[test]
    fn decoupled_arms_keep_everything_in_the_input_leg() {
        let net = SpinNetwork::ybeam(50, 50, 50, 1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
        let h = Hamiltonian::from_network(&net).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let psi = gaussian_packet(&net, &GaussianPacketSpec::new("A", 25.0, 0.3)).unwrap();
        // Round trip inside the closed 50-site leg: 25 -> 50 -> 1 -> 25.
        let r = reflection_factor(&net, &prop, &psi, 49.0).unwrap();
        assert!(r.reflection > 0.9);
        assert_eq!(leg_transmission(&net, &prop, &psi, 49.0, "C").unwrap(), 0.0);
    }

    #[test]
    fn transmission_ratio_follows_the_mixing_angle() {
        let net = SpinNetwork::ybeam(50, 50, 50, 1.0, 1.0, 1.0, 0.6, 0.8).unwrap();
        let h = Hamiltonian::from_network(&net).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let psi = gaussian_packet(&net, &GaussianPacketSpec::new("A", 25.0, 0.3)).unwrap();
        let t0 = timing::reflection_instant(50, 25.0, 50, 1.0);
        let tb = leg_transmission(&net, &prop, &psi, t0, "B").unwrap();
        let tc = leg_transmission(&net, &prop, &psi, t0, "C").unwrap();
        let tan_sq = (0.8f64 / 0.6).powi(2);
        assert!((tc / tb - tan_sq).abs() / tan_sq < 0.05, "ratio {}", tc / tb);
    }

    #[test]
    fn fully_one_sided_state_has_zero_concurrence() {
        let net = SpinNetwork::ybeam(10, 10, 10, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        let mut amps = Array1::from_elem(net.site_count(), C64::new(0.0, 0.0));
        let b_sites = net.leg_sites("B").unwrap();
        let weight = C64::new(1.0 / (b_sites.len() as f64).sqrt(), 0.0);
        for s in b_sites {
            amps[s] = weight;
        }
        let psi = StateVector::new(amps);
        assert_eq!(concurrence(&net, &psi, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn two_site_analog_gives_sin_two_theta() {
        // State cos(theta)|B,i> + sin(theta)|C,i> inside the window:
        // C = |sin 2 theta|, maximal at theta = pi/4.
        let net = SpinNetwork::ybeam(4, 6, 6, 1.0, 1.0, 1.0, 0.5, 0.5).unwrap();
        for theta in [0.0, 0.3, std::f64::consts::FRAC_PI_4, 1.1] {
            let mut amps = Array1::from_elem(net.site_count(), C64::new(0.0, 0.0));
            amps[net.site_index("B", 6).unwrap()] = C64::new(theta.cos(), 0.0);
            amps[net.site_index("C", 6).unwrap()] = C64::new(theta.sin(), 0.0);
            let psi = StateVector::new(amps);
            let c = concurrence(&net, &psi, 3.0).unwrap();
            assert!((c - (2.0 * theta).sin().abs()) < 1e-12, "theta={theta}");
        }
    }

    #[test]
    fn concurrence_requires_equal_arms() {
        let net = SpinNetwork::ybeam(4, 5, 6, 1.0, 1.0, 1.0, 0.5, 0.5).unwrap();
        let psi = gaussian_packet(&net, &GaussianPacketSpec::new("A", 2.0, 1.0)).unwrap();
        assert!(concurrence(&net, &psi, 3.0).is_err());

        let star = SpinNetwork::star(3, 4, 4, 1.0, 0.5).unwrap();
        let psi = gaussian_packet(&star, &GaussianPacketSpec::new("A", 2.0, 1.0)).unwrap();
        assert!(concurrence(&star, &psi, 3.0).is_err());
    }

    #[test]
    fn max_concurrence_trivial_grid() {
        let (net, prop, psi) = matched_ybeam();
        let res = max_concurrence(&net, &prop, &psi, &[0.0], packet_width(0.3)).unwrap();
        // t = 0 goes through V V^T, so the arms hold only rounding residue.
        assert!(res.c_max < 1e-20);
        assert_eq!(res.t_star, 0.0);
    }

    #[test]
    fn max_concurrence_near_unity_when_matched() {
        let (net, prop, psi) = matched_ybeam();
        let grid = timing::concurrence_time_grid(50, 50, 25.0, 0.3, 1.0, 400);
        let res = max_concurrence(&net, &prop, &psi, &grid, packet_width(0.3)).unwrap();
        assert!(res.c_max > 0.95, "c_max = {}", res.c_max);
        assert!(res.c_max <= 1.0 + tol::SPECTRAL);
        // Refinement stability: doubling the grid density barely moves it.
        let fine = timing::concurrence_time_grid(50, 50, 25.0, 0.3, 1.0, 800);
        let res2 = max_concurrence(&net, &prop, &psi, &fine, packet_width(0.3)).unwrap();
        assert!((res.c_max - res2.c_max).abs() < 1e-3);
    }

    #[test]
    fn interference_disconnected_first_node_is_dark() {
        let net = SpinNetwork::interferometer(10, 8, 0, 8, 1.0, 0.0).unwrap();
        let h = Hamiltonian::from_network(&net).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let psi = gaussian_packet(&net, &GaussianPacketSpec::new("A", 5.0, 0.8)).unwrap();
        let r0 = net.site_index("D", 4).unwrap();
        for t0 in [3.0, 9.0, 30.0] {
            assert_eq!(interference_intensity(&prop, &psi, r0, t0).unwrap(), 0.0);
        }
    }

    #[test]
    fn interference_site_bounds() {
        let net = SpinNetwork::interferometer(6, 5, 0, 5, 1.0, 0.5).unwrap();
        let h = Hamiltonian::from_network(&net).unwrap();
        let prop = Propagator::new(&h).unwrap();
        let psi = gaussian_packet(&net, &GaussianPacketSpec::new("A", 3.0, 1.0)).unwrap();
        assert!(interference_intensity(&prop, &psi, net.site_count(), 1.0).is_err());
    }
}
