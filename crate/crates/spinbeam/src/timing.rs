//! Kinematic helpers: the ballistic law `N(t) = N0 + 2 t J - M` turned
//! into default measurement instants for the observables.

use crate::wavepacket::packet_width;

/// Travel time for a distance in sites at group velocity `2 J`.
pub fn arrival_time(distance_sites: f64, coupling: f64) -> f64 {
    distance_sites / (2.0 * coupling)
}

/// Default instant for reflection/transmission sweeps: the packet center
/// has reached the middle of the output legs, clear of both the node and
/// the far boundaries.
pub fn reflection_instant(input_len: usize, packet_center: f64, arm_len: usize, coupling: f64) -> f64 {
    arrival_time(input_len as f64 - packet_center + arm_len as f64 / 2.0, coupling)
}

/// Uniform time grid bracketing the packet's arrival at the concurrence
/// window: `points` samples over `[0.5, 1.5] * t_arrive`, where `t_arrive`
/// is the ballistic prediction for reaching site `N - W/2`.
pub fn concurrence_time_grid(
    input_len: usize,
    arm_len: usize,
    packet_center: f64,
    alpha: f64,
    coupling: f64,
    points: usize,
) -> Vec<f64> {
    let target = arm_len as f64 - packet_width(alpha) / 2.0;
    let t_arrive = arrival_time(input_len as f64 - packet_center + target, coupling);
    linspace(0.5 * t_arrive, 1.5 * t_arrive, points)
}

/// `points` evenly spaced values from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (points - 1) as f64;
            (0..points).map(|i| start + step * i as f64).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig2_style_instant() {
        // M = N = 50, N0 = 25: packet center mid output leg at t = 25/J.
        assert_eq!(reflection_instant(50, 25.0, 50, 1.0), 25.0);
        assert_eq!(reflection_instant(50, 25.0, 50, 2.0), 12.5);
    }

    #[test]
    fn concurrence_grid_brackets_arrival() {
        let grid = concurrence_time_grid(50, 50, 25.0, 0.3, 1.0, 400);
        assert_eq!(grid.len(), 400);
        let t_arrive = (25.0 + 50.0 - packet_width(0.3) / 2.0) / 2.0;
        assert!((grid[0] - 0.5 * t_arrive).abs() < 1e-12);
        assert!((grid[399] - 1.5 * t_arrive).abs() < 1e-12);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(1.0, 2.0, 1), vec![1.0]);
        let v = linspace(0.0, 1.5, 41);
        assert_eq!(v.len(), 41);
        assert_eq!(v[0], 0.0);
        assert!((v[40] - 1.5).abs() < 1e-15);
    }
}
