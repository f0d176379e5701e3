//! Shared helpers for the integration suites, including the independent
//! fixed-step integrator used as an evolution oracle. The integrator never
//! touches the eigendecomposition path it checks.

use ndarray::Array1;
use num_complex::Complex64 as C64;
use spinbeam::{Hamiltonian, StateVector};

/// Classic fixed-step RK4 for `d psi / dt = -i H psi`.
pub fn rk4_evolve(h: &Hamiltonian, psi0: &StateVector, t: f64, dt: f64) -> StateVector {
    let m = h.matrix();
    let deriv = |psi: &Array1<C64>| -> Array1<C64> {
        let n = psi.len();
        let mut out = Array1::from_elem(n, C64::new(0.0, 0.0));
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                let w = m[[i, j]];
                if w != 0.0 {
                    acc += w * psi[j];
                }
            }
            out[i] = C64::new(0.0, -1.0) * acc;
        }
        out
    };

    let steps = (t / dt).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let mut psi = psi0.amplitudes().clone();
    for _ in 0..steps {
        let k1 = deriv(&psi);
        let k2 = deriv(&(&psi + &(&k1 * C64::new(dt / 2.0, 0.0))));
        let k3 = deriv(&(&psi + &(&k2 * C64::new(dt / 2.0, 0.0))));
        let k4 = deriv(&(&psi + &(&k3 * C64::new(dt, 0.0))));
        psi = &psi
            + &((&k1 + &(&k2 * C64::new(2.0, 0.0)) + &(&k3 * C64::new(2.0, 0.0)) + &k4)
                * C64::new(dt / 6.0, 0.0));
    }
    StateVector::new(psi)
}

pub fn max_amp_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes().iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest absolute entry difference between two matrices.
pub fn max_entry_diff(a: &ndarray::Array2<f64>, b: &ndarray::Array2<f64>) -> f64 {
    (a - b).iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Map `f` over `items` on all available cores, preserving order.
#[allow(dead_code)]
pub fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let stride = workers.max(1);
    let mut indexed: Vec<(usize, R)> = Vec::with_capacity(items.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..stride)
            .map(|offset| {
                let f = &f;
                scope.spawn(move || {
                    items
                        .iter()
                        .enumerate()
                        .skip(offset)
                        .step_by(stride)
                        .map(|(i, item)| (i, f(item)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            indexed.extend(handle.join().expect("worker panicked"));
        }
    });
    indexed.sort_by_key(|(i, _)| *i);
    indexed.into_iter().map(|(_, r)| r).collect()
}

/// Global mean and variance of `|psi|^2` in 1-based site coordinates.
pub fn global_moments(psi: &StateVector) -> (f64, f64) {
    let mut w = 0.0;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for (i, z) in psi.amplitudes().iter().enumerate() {
        let x = (i + 1) as f64;
        let p = z.norm_sqr();
        w += p;
        s1 += x * p;
        s2 += x * x * p;
    }
    let mean = s1 / w;
    (mean, s2 / w - mean * mean)
}
