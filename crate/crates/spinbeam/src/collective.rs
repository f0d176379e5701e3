//! Collective-mode (virtual chain) basis and the decoupling/matching
//! algebra, verified at the matrix level without any time evolution.
//!
//! For a star with `m` identical output legs the orthogonal rows are the
//! identity on the input leg, the uniform `1/sqrt(m)` combination across
//! legs at equal depth (virtual chain `a`), and `m - 1` complementary
//! combinations at each depth. The complementary modes of the reference
//! construction are complex Fourier weights `exp(-i 2 pi p q / m)`; the
//! complementary chains are degenerate and mutually decoupled, so this
//! module uses the real cosine/sine combinations spanning the same
//! subspace, keeping the whole transform real orthogonal.
//!
//! For the asymmetric Y-beam the mixing angle `theta` with
//! `tan(theta) = J_nC / J_nB` rotates legs `B`, `C` into chains `a`, `b`.
//! In chain coordinates the only inter-chain couplings are `g` on
//! depth-offset bonds and `J_AB` on the node bond:
//!
//! ```text
//! g    = (J_B - J_C) sin(2 theta) / 2
//! J_AB = J_nB sin(theta) - J_nC cos(theta)
//! ```
//!
//! Both vanish at the matched angle with `J_B = J_C`, and chain `a`
//! becomes homogeneous exactly on the matching circle
//! `J_A = sqrt(J_nB^2 + J_nC^2) = J_B = J_C`.

use std::ops::Range;

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::Hamiltonian;
use crate::network::{LegEnd, SpinNetwork};
use crate::tol;

/// One labeled block of virtual-chain indices in the transformed basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainBlock {
    pub label: String,
    pub sites: Range<usize>,
}

/// Orthogonal change of basis; rows are the virtual-site basis vectors,
/// columns the global site basis of the source network.
#[derive(Debug, Clone)]
pub struct CollectiveBasis {
    matrix: Array2<f64>,
    partition: Vec<ChainBlock>,
}

impl CollectiveBasis {
    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn partition(&self) -> &[ChainBlock] {
        &self.partition
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |U U^T - I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let gram = self.matrix.dot(&self.matrix.t());
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[[i, j]] - target).abs());
            }
        }
        worst
    }
}

/// Mixing angle `theta = atan2(J_nC, J_nB)` in `[0, pi/2]` for nonnegative
/// couplings. Rejects the doubly-disconnected node.
pub fn mixing_angle(j_nb: f64, j_nc: f64) -> Result<f64> {
    if j_nb == 0.0 && j_nc == 0.0 {
        return Err(Error::InvalidParameter(
            "mixing angle undefined when both node couplings vanish".into(),
        ));
    }
    Ok(j_nc.atan2(j_nb))
}

/// Collective basis for a star with `arms` output legs of length `arm_len`
/// behind an input leg of length `input_len`. Row order: chain `a`
/// (input followed by the uniform combination), then complementary chains
/// `b1..b(m-1)` given by cosine/sine Fourier rows (and the alternating row
/// for even `m`).
pub fn star_collective_basis(
    arms: usize,
    input_len: usize,
    arm_len: usize,
) -> Result<CollectiveBasis> {
    if arms < 1 || input_len < 1 || arm_len < 1 {
        return Err(Error::InvalidParameter(
            "star basis needs arms >= 1 and positive leg lengths".into(),
        ));
    }
    let n = input_len + arms * arm_len;
    let mut u = Array2::zeros((n, n));

    for j in 0..input_len {
        u[[j, j]] = 1.0;
    }

    // Per-depth mixing weights over the leg index p = 1..=m. First row is
    // the uniform combination; the rest span its orthogonal complement.
    let mut weights: Vec<Vec<f64>> = Vec::with_capacity(arms);
    let m = arms as f64;
    weights.push(vec![1.0 / m.sqrt(); arms]);
    for q in 1..=((arms - 1) / 2) {
        let scale = (2.0 / m).sqrt();
        let row = |f: fn(f64) -> f64| {
            (1..=arms)
                .map(|p| scale * f(2.0 * std::f64::consts::PI * (p * q) as f64 / m))
                .collect::<Vec<_>>()
        };
        weights.push(row(f64::cos));
        weights.push(row(f64::sin));
    }
    if arms % 2 == 0 && arms > 1 {
        weights.push(
            (1..=arms)
                .map(|p| if p % 2 == 1 { 1.0 } else { -1.0 } / m.sqrt())
                .collect(),
        );
    }

    let col = |p: usize, depth: usize| input_len + (p - 1) * arm_len + depth;
    for (q, w) in weights.iter().enumerate() {
        let row_base = if q == 0 { input_len } else { input_len + arm_len * q };
        for depth in 0..arm_len {
            for p in 1..=arms {
                u[[row_base + depth, col(p, depth)]] = w[p - 1];
            }
        }
    }

    let mut partition = vec![ChainBlock { label: "a".into(), sites: 0..input_len + arm_len }];
    for q in 1..arms {
        let start = input_len + arm_len * q;
        partition.push(ChainBlock { label: format!("b{q}"), sites: start..start + arm_len });
    }
    Ok(CollectiveBasis { matrix: u, partition })
}

/// Collective basis for a Y-beam with equal arm lengths: chain `a` is the
/// input leg followed by `cos(theta) B + sin(theta) C`, chain `b` is
/// `sin(theta) B - cos(theta) C`.
pub fn ybeam_collective_basis(
    theta: f64,
    input_len: usize,
    arm_len: usize,
) -> Result<CollectiveBasis> {
    if input_len < 1 || arm_len < 1 {
        return Err(Error::InvalidParameter("ybeam basis needs positive leg lengths".into()));
    }
    let n = input_len + 2 * arm_len;
    let mut u = Array2::zeros((n, n));
    for j in 0..input_len {
        u[[j, j]] = 1.0;
    }
    let (sin, cos) = theta.sin_cos();
    for depth in 0..arm_len {
        let b = input_len + depth;
        let c = input_len + arm_len + depth;
        u[[input_len + depth, b]] = cos;
        u[[input_len + depth, c]] = sin;
        u[[input_len + arm_len + depth, b]] = sin;
        u[[input_len + arm_len + depth, c]] = -cos;
    }
    let partition = vec![
        ChainBlock { label: "a".into(), sites: 0..input_len + arm_len },
        ChainBlock { label: "b".into(), sites: input_len + arm_len..n },
    ];
    Ok(CollectiveBasis { matrix: u, partition })
}

/// `H' = U H U^T` in the virtual-chain basis.
pub fn transform_hamiltonian(h: &Hamiltonian, basis: &CollectiveBasis) -> Result<Hamiltonian> {
    if h.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: h.dim() });
    }
    let u = basis.matrix();
    Hamiltonian::new(u.dot(h.matrix()).dot(&u.t()))
}

/// Matrix-level summary of the decoupling and matching structure of a
/// star or Y-beam, serializable for the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct DecouplingReport {
    /// Mixing angle used to build the basis (`atan2` of the node couplings
    /// for two arms, `pi/4` marker for uniform stars).
    pub theta: f64,
    /// Inter-chain hopping coefficient `(J_B - J_C) sin(2 theta) / 2`.
    pub g: f64,
    /// Node leak coefficient `J_nB sin(theta) - J_nC cos(theta)`.
    pub j_ab: f64,
    /// Virtual node bond `sqrt(sum of squared node couplings)`
    /// (`J_nB / cos(theta)` at the matched angle).
    pub j_am: f64,
    /// Impurity strength on chain `a`: input coupling minus `j_am`; zero
    /// exactly on the matching circle.
    pub h_vn_coeff: f64,
    /// Largest `|H'|` entry between different partition blocks.
    pub offblock_norm: f64,
    /// True when every chain-`a` bond equals the input coupling within
    /// 1e-12, i.e. the coupling matching condition holds.
    pub chain_a_homogeneous: bool,
}

/// Build the collective basis for a single-node star/Y-beam network,
/// transform its Hamiltonian and measure the decoupling quantities.
pub fn decoupling_report(network: &SpinNetwork) -> Result<DecouplingReport> {
    let node = match network.nodes() {
        [node] => node,
        _ => {
            return Err(Error::UnsupportedTopology(
                "decoupling report needs exactly one node".into(),
            ))
        }
    };
    let input = network
        .leg(&node.anchor.0)
        .ok_or_else(|| Error::UnknownLeg(node.anchor.0.clone()))?;
    if node.anchor.1 != input.length {
        return Err(Error::UnsupportedTopology(
            "node must attach at the last site of the input leg".into(),
        ));
    }
    if node.bonds.len() < 2 {
        return Err(Error::UnsupportedTopology("need at least two output legs".into()));
    }
    if node.bonds.iter().any(|b| b.end != LegEnd::First) {
        return Err(Error::UnsupportedTopology(
            "output legs must attach through their first site".into(),
        ));
    }
    let outputs: Vec<_> = node
        .bonds
        .iter()
        .map(|b| network.leg(&b.leg).expect("validated leg reference"))
        .collect();
    let arm_len = outputs[0].length;
    if outputs.iter().any(|l| l.length != arm_len) {
        return Err(Error::UnsupportedTopology(
            "output legs must have equal lengths".into(),
        ));
    }

    let h = Hamiltonian::from_network(network)?;
    let (theta, g, j_ab, basis) = if node.bonds.len() == 2 {
        let (j_nb, j_nc) = (node.bonds[0].coupling, node.bonds[1].coupling);
        let theta = mixing_angle(j_nb, j_nc)?;
        let g = (outputs[0].coupling - outputs[1].coupling) * (2.0 * theta).sin() / 2.0;
        let j_ab = j_nb * theta.sin() - j_nc * theta.cos();
        (theta, g, j_ab, ybeam_collective_basis(theta, input.length, arm_len)?)
    } else {
        let j_out = outputs[0].coupling;
        let j_n = node.bonds[0].coupling;
        let uniform = outputs.iter().all(|l| (l.coupling - j_out).abs() <= tol::ALGEBRAIC)
            && node.bonds.iter().all(|b| (b.coupling - j_n).abs() <= tol::ALGEBRAIC);
        if !uniform {
            return Err(Error::UnsupportedTopology(
                "stars with more than two arms must have uniform arm and node couplings"
                    .into(),
            ));
        }
        let basis = star_collective_basis(node.bonds.len(), input.length, arm_len)?;
        (std::f64::consts::FRAC_PI_4, 0.0, 0.0, basis)
    };

    let hp = transform_hamiltonian(&h, &basis)?;
    let offblock_norm = offblock_norm(&hp, basis.partition());

    let j_am = node.bonds.iter().map(|b| b.coupling * b.coupling).sum::<f64>().sqrt();
    let chain_a = &basis.partition()[0].sites;
    let mut homogeneous = true;
    for i in chain_a.start..chain_a.end - 1 {
        if (hp.matrix()[[i, i + 1]] - input.coupling).abs() > tol::ALGEBRAIC {
            homogeneous = false;
            break;
        }
    }

    Ok(DecouplingReport {
        theta,
        g,
        j_ab,
        j_am,
        h_vn_coeff: input.coupling - j_am,
        offblock_norm,
        chain_a_homogeneous: homogeneous,
    })
}

/// Largest `|H|` entry connecting two different partition blocks.
pub fn offblock_norm(h: &Hamiltonian, partition: &[ChainBlock]) -> f64 {
    let mut worst = 0.0f64;
    for (bi, block_i) in partition.iter().enumerate() {
        for block_j in partition.iter().skip(bi + 1) {
            for r in block_i.sites.clone() {
                for c in block_j.sites.clone() {
                    worst = worst.max(h.matrix()[[r, c]].abs());
                }
            }
        }
    }
    worst
}
