//! Config resolution, sweep execution and artifact writing.
//!
//! Every run is deterministic: grids resolve to explicit value lists, the
//! fully-resolved parameter set (including defaulted instants) is echoed
//! into the artifact, workers fill a preallocated grid in index order, and
//! floats print through the shortest-roundtrip formatter. Two runs of the
//! same config produce byte-identical files.

use std::fmt;
use std::path::PathBuf;

use rayon::prelude::*;
use serde_json::json;
use spinbeam::{
    decoupling_report, gaussian_packet, interference_intensity, max_concurrence, packet_width,
    reflection_factor, timing, GaussianPacketSpec, Hamiltonian, Propagator, SpinNetwork,
    StateVector,
};

use crate::config::{
    DeltaRange, ExperimentConfig, Format, Observable, Output, Packet, RangeSpec, Topology,
};

#[derive(Debug)]
pub enum RunError {
    /// Bad or inconsistent configuration; exit code 2.
    Config(String),
    /// Filesystem failure; exit code 1.
    Io(String),
    /// Numerical failure at run time; exit code 3.
    Numeric(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Io(_) => 1,
            RunError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(msg) => write!(f, "config error: {msg}"),
            RunError::Io(msg) => write!(f, "io error: {msg}"),
            RunError::Numeric(msg) => write!(f, "numerical error: {msg}"),
        }
    }
}

impl From<spinbeam::Error> for RunError {
    fn from(e: spinbeam::Error) -> Self {
        RunError::Numeric(e.to_string())
    }
}

#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub dump_hamiltonian: Option<PathBuf>,
}

enum Body {
    Table { columns: Vec<String>, rows: Vec<Vec<f64>> },
    Report(serde_json::Value),
}

/// Run one experiment and return the written artifact path.
pub fn run(
    expected_kind: &str,
    config: &ExperimentConfig,
    overrides: &Overrides,
) -> Result<PathBuf, RunError> {
    if config.observable.kind() != expected_kind {
        return Err(RunError::Config(format!(
            "observable.kind is `{}` but this subcommand runs `{expected_kind}`",
            config.observable.kind()
        )));
    }

    let (path, format) = resolve_output(config, overrides)?;
    if matches!(config.observable, Observable::TransformCheck) && format == Format::Csv {
        return Err(RunError::Config(
            "output.format: transform-check emits a JSON report; set format = \"json\""
                .into(),
        ));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(overrides.threads.unwrap_or(0))
        .build()
        .map_err(|e| RunError::Config(format!("threads: {e}")))?;
    let (metadata, body) = pool.install(|| dispatch(config, &path, format))?;

    if let Some(dump) = &overrides.dump_hamiltonian {
        let network = base_network(&config.topology, None)?;
        dump_hamiltonian(&network, dump)?;
    }

    let bytes = render(&metadata, &body, format);
    std::fs::write(&path, bytes)
        .map_err(|e| RunError::Io(format!("writing {}: {e}", path.display())))?;
    Ok(path)
}

fn resolve_output(
    config: &ExperimentConfig,
    overrides: &Overrides,
) -> Result<(PathBuf, Format), RunError> {
    let path = overrides
        .out
        .clone()
        .or_else(|| config.output.as_ref().map(|o| o.path.clone()))
        .ok_or_else(|| RunError::Config("output.path missing (or pass --out)".into()))?;
    let format = overrides
        .format
        .or(config.output.as_ref().map(|o| o.format))
        .unwrap_or_default();
    Ok((path, format))
}

fn dispatch(
    config: &ExperimentConfig,
    path: &std::path::Path,
    format: Format,
) -> Result<(serde_json::Value, Body), RunError> {
    let output = Output { path: path.to_path_buf(), format };
    match &config.observable {
        Observable::Reflection { j_nb, j_nc, t0 } => {
            run_reflection(config, &output, *j_nb, *j_nc, *t0)
        }
        Observable::Concurrence { j_nb, j_nc, time_points } => {
            run_concurrence(config, &output, *j_nb, *j_nc, *time_points)
        }
        Observable::Interference { delta, r0, t0 } => {
            run_interference(config, &output, *delta, *r0, *t0)
        }
        Observable::TransformCheck => run_transform_check(config, &output),
        Observable::Evolve { times } => run_evolve(config, &output, *times),
    }
}

/// Build the declared topology; `node_couplings` substitutes the Y-beam
/// node couplings when a sweep supplies them.
fn base_network(
    topology: &Topology,
    node_couplings: Option<(f64, f64)>,
) -> Result<SpinNetwork, RunError> {
    let net = match *topology {
        Topology::Star { m, input_len, arm_len, coupling, node_coupling } => {
            SpinNetwork::star(m, input_len, arm_len, coupling, node_coupling)
        }
        Topology::Ybeam { input_len, len_b, len_c, j_a, j_b, j_c, j_nb, j_nc } => {
            let (j_nb, j_nc) = match node_couplings {
                Some(pair) => pair,
                None => (
                    j_nb.ok_or_else(|| RunError::Config("topology.J_nB missing".into()))?,
                    j_nc.ok_or_else(|| RunError::Config("topology.J_nC missing".into()))?,
                ),
            };
            SpinNetwork::ybeam(input_len, len_b, len_c, j_a, j_b, j_c, j_nb, j_nc)
        }
        Topology::Interferometer { len_a, len_b, delta, len_d, coupling, node_coupling } => {
            SpinNetwork::interferometer(len_a, len_b, delta, len_d, coupling, node_coupling)
        }
    };
    net.map_err(|e| RunError::Config(format!("topology: {e}")))
}

fn ybeam_params(topology: &Topology, kind: &str) -> Result<(usize, usize, usize, f64), RunError> {
    match *topology {
        Topology::Ybeam { input_len, len_b, len_c, j_a, .. } => {
            Ok((input_len, len_b, len_c, j_a))
        }
        _ => Err(RunError::Config(format!(
            "topology.kind: observable `{kind}` needs a ybeam topology"
        ))),
    }
}

/// Resolve the packet block and build the state on the given network,
/// warning on stderr when the 4-sigma support spills out of the leg.
fn resolve_packet(
    config: &ExperimentConfig,
    network: &SpinNetwork,
    kind: &str,
) -> Result<(Packet, GaussianPacketSpec, StateVector), RunError> {
    let packet = config
        .packet
        .clone()
        .ok_or_else(|| RunError::Config(format!("packet: block required for `{kind}`")))?;
    let momentum = packet.momentum.unwrap_or(std::f64::consts::FRAC_PI_2);
    let spec = GaussianPacketSpec::new(packet.leg.clone(), packet.n0, packet.alpha)
        .with_momentum(momentum);
    let state = gaussian_packet(network, &spec)
        .map_err(|e| RunError::Config(format!("packet: {e}")))?;
    if !spec.fits_leg(network).unwrap_or(false) {
        eprintln!(
            "warning: packet 4-sigma support extends outside leg `{}`; tails are truncated",
            spec.leg
        );
    }
    let resolved = Packet { momentum: Some(momentum), ..packet };
    Ok((resolved, spec, state))
}

fn propagator_for(network: &SpinNetwork) -> Result<Propagator, RunError> {
    Ok(Propagator::new(&Hamiltonian::from_network(network)?)?)
}

fn metadata(
    command: &str,
    config: &ExperimentConfig,
    packet: Option<&Packet>,
    observable: serde_json::Value,
    output: &Output,
) -> serde_json::Value {
    json!({
        "command": command,
        "topology": config.topology,
        "packet": packet,
        "observable": observable,
        "output": { "path": output.path, "format": output.format },
    })
}

fn run_reflection(
    config: &ExperimentConfig,
    output: &Output,
    j_nb: RangeSpec,
    j_nc: RangeSpec,
    t0: Option<f64>,
) -> Result<(serde_json::Value, Body), RunError> {
    let (input_len, len_b, _, j_a) = ybeam_params(&config.topology, "reflection")?;
    let b_values = j_nb.values("observable.j_nb")?;
    let c_values = j_nc.values("observable.j_nc")?;

    let template = base_network(&config.topology, Some((b_values[0], c_values[0])))?;
    let (packet, _, psi0) = resolve_packet(config, &template, "reflection")?;
    let t0 = t0.unwrap_or_else(|| timing::reflection_instant(input_len, packet.n0, len_b, j_a));
    if t0 < 0.0 {
        return Err(RunError::Config(format!("observable.t0 must be >= 0, got {t0}")));
    }

    let points: Vec<(f64, f64)> = b_values
        .iter()
        .flat_map(|&b| c_values.iter().map(move |&c| (b, c)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(b, c)| -> Result<Vec<f64>, RunError> {
            let network = base_network(&config.topology, Some((b, c)))?;
            let prop = propagator_for(&network)?;
            let r = reflection_factor(&network, &prop, &psi0, t0)?.reflection;
            Ok(vec![b, c, r])
        })
        .collect::<Result<Vec<_>, _>>()?;

    let meta = metadata(
        "reflect-sweep",
        config,
        Some(&packet),
        json!({ "kind": "reflection", "j_nb": j_nb, "j_nc": j_nc, "t0": t0 }),
        output,
    );
    Ok((meta, Body::Table { columns: str_cols(&["j_nb", "j_nc", "r"]), rows }))
}

fn run_concurrence(
    config: &ExperimentConfig,
    output: &Output,
    j_nb: RangeSpec,
    j_nc: RangeSpec,
    time_points: Option<usize>,
) -> Result<(serde_json::Value, Body), RunError> {
    let (input_len, len_b, len_c, j_a) = ybeam_params(&config.topology, "concurrence")?;
    if len_b != len_c {
        return Err(RunError::Config(format!(
            "topology.N_C: concurrence needs equal arms, got N_B = {len_b}, N_C = {len_c}"
        )));
    }
    let b_values = j_nb.values("observable.j_nb")?;
    let c_values = j_nc.values("observable.j_nc")?;
    let points_count = time_points.unwrap_or(400);
    if points_count == 0 {
        return Err(RunError::Config("observable.time_points must be > 0".into()));
    }

    let template = base_network(&config.topology, Some((b_values[0], c_values[0])))?;
    let (packet, _, psi0) = resolve_packet(config, &template, "concurrence")?;
    let window = packet_width(packet.alpha);
    let times =
        timing::concurrence_time_grid(input_len, len_b, packet.n0, packet.alpha, j_a, points_count);

    let points: Vec<(f64, f64)> = b_values
        .iter()
        .flat_map(|&b| c_values.iter().map(move |&c| (b, c)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(b, c)| -> Result<Vec<f64>, RunError> {
            let network = base_network(&config.topology, Some((b, c)))?;
            let prop = propagator_for(&network)?;
            let res = max_concurrence(&network, &prop, &psi0, &times, window)?;
            Ok(vec![b, c, res.c_max, res.t_star])
        })
        .collect::<Result<Vec<_>, _>>()?;

    let meta = metadata(
        "concurrence-sweep",
        config,
        Some(&packet),
        json!({
            "kind": "concurrence",
            "j_nb": j_nb,
            "j_nc": j_nc,
            "time_points": points_count,
            "time_window": [times[0], times[times.len() - 1]],
            "concurrence_window": window,
        }),
        output,
    );
    Ok((meta, Body::Table { columns: str_cols(&["j_nb", "j_nc", "c_max", "t_star"]), rows }))
}

fn run_interference(
    config: &ExperimentConfig,
    output: &Output,
    delta: DeltaRange,
    r0: usize,
    t0: Option<f64>,
) -> Result<(serde_json::Value, Body), RunError> {
    let (len_a, len_b, len_d, coupling) = match config.topology {
        Topology::Interferometer { len_a, len_b, len_d, coupling, .. } => {
            (len_a, len_b, len_d, coupling)
        }
        _ => {
            return Err(RunError::Config(
                "topology.kind: observable `interference` needs an interferometer".into(),
            ))
        }
    };
    if r0 < 1 || r0 > len_d {
        return Err(RunError::Config(format!(
            "observable.r0 must lie on leg D (1..={len_d}), got {r0}"
        )));
    }
    let deltas = delta.values("observable.delta")?;
    if let Some(&worst) = deltas.iter().min() {
        if worst <= -(len_b as i64) {
            return Err(RunError::Config(format!(
                "observable.delta.min {worst} leaves leg C empty (N_B = {len_b})"
            )));
        }
    }

    let packet_cfg = config
        .packet
        .clone()
        .ok_or_else(|| RunError::Config("packet: block required for `interference`".into()))?;
    let t0 = t0.unwrap_or_else(|| {
        timing::arrival_time(len_a as f64 - packet_cfg.n0 + (len_b + r0) as f64, coupling)
    });

    let mut resolved_packet = None;
    let rows = deltas
        .par_iter()
        .map(|&d| -> Result<(Vec<f64>, Packet), RunError> {
            let topology = match config.topology {
                Topology::Interferometer { len_a, len_b, len_d, coupling, node_coupling, .. } => {
                    Topology::Interferometer { len_a, len_b, delta: d, len_d, coupling, node_coupling }
                }
                _ => unreachable!(),
            };
            let network = base_network(&topology, None)?;
            let (packet, _, psi0) = resolve_packet(config, &network, "interference")?;
            let prop = propagator_for(&network)?;
            let site = network.site_index("D", r0)?;
            let intensity = interference_intensity(&prop, &psi0, site, t0)?;
            Ok((vec![d as f64, intensity], packet))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .map(|(row, packet)| {
            resolved_packet.get_or_insert(packet);
            row
        })
        .collect();

    let meta = metadata(
        "interfere",
        config,
        resolved_packet.as_ref(),
        json!({ "kind": "interference", "delta": delta, "r0": r0, "t0": t0 }),
        output,
    );
    Ok((meta, Body::Table { columns: str_cols(&["delta", "intensity"]), rows }))
}

fn run_transform_check(
    config: &ExperimentConfig,
    output: &Output,
) -> Result<(serde_json::Value, Body), RunError> {
    let network = base_network(&config.topology, None)?;
    let report = decoupling_report(&network)?;
    let meta = metadata(
        "transform-check",
        config,
        None,
        json!({ "kind": "transform-check" }),
        output,
    );
    Ok((meta, Body::Report(serde_json::to_value(&report).expect("report serializes"))))
}

fn run_evolve(
    config: &ExperimentConfig,
    output: &Output,
    times: crate::config::TimeGrid,
) -> Result<(serde_json::Value, Body), RunError> {
    if times.samples < 1 {
        return Err(RunError::Config("observable.times.samples must be >= 1".into()));
    }
    if !(times.max >= 0.0) {
        return Err(RunError::Config(format!(
            "observable.times.max must be >= 0, got {}",
            times.max
        )));
    }
    let network = base_network(&config.topology, None)?;
    let (packet, _, psi0) = resolve_packet(config, &network, "evolve")?;
    let prop = propagator_for(&network)?;
    let grid = timing::linspace(0.0, times.max, times.samples);
    let states = prop.evolve_series(&psi0, &grid)?;

    let mut columns = vec!["t".to_string()];
    for site in 0..network.site_count() {
        let (leg, j) = network.site_locate(site)?;
        columns.push(format!("{leg}{j}"));
    }
    let rows = grid
        .iter()
        .zip(&states)
        .map(|(&t, state)| {
            let mut row = Vec::with_capacity(network.site_count() + 1);
            row.push(t);
            row.extend(state.amplitudes().iter().map(|z| z.norm_sqr()));
            row
        })
        .collect();

    let meta = metadata(
        "evolve-dump",
        config,
        Some(&packet),
        json!({ "kind": "evolve", "times": times }),
        output,
    );
    Ok((meta, Body::Table { columns, rows }))
}

fn str_cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn render(metadata: &serde_json::Value, body: &Body, format: Format) -> Vec<u8> {
    match (format, body) {
        (Format::Csv, Body::Table { columns, rows }) => {
            let mut out = String::new();
            out.push_str("# ");
            out.push_str(&metadata.to_string());
            out.push('\n');
            out.push_str(&columns.join(","));
            out.push('\n');
            for row in rows {
                let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out.into_bytes()
        }
        (Format::Json, Body::Table { columns, rows }) => {
            let doc = json!({ "metadata": metadata, "columns": columns, "rows": rows });
            let mut bytes = serde_json::to_vec_pretty(&doc).expect("document serializes");
            bytes.push(b'\n');
            bytes
        }
        (_, Body::Report(report)) => {
            let doc = json!({ "metadata": metadata, "report": report });
            let mut bytes = serde_json::to_vec_pretty(&doc).expect("document serializes");
            bytes.push(b'\n');
            bytes
        }
    }
}

/// Debug dump: nonzero entries of the single-excitation Hamiltonian as
/// `row,col,value` triplets (upper triangle).
fn dump_hamiltonian(network: &SpinNetwork, path: &std::path::Path) -> Result<(), RunError> {
    let h = Hamiltonian::from_network(network)?;
    let mut out = String::from("row,col,value\n");
    for (i, j, w) in h.nonzero_bonds() {
        out.push_str(&format!("{i},{j},{w}\n"));
    }
    std::fs::write(path, out).map_err(|e| RunError::Io(format!("writing {}: {e}", path.display())))
}
