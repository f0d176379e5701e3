//! Leg/node topologies and the canonical global site indexing.
//!
//! A [`SpinNetwork`] is a list of legs (open chains with a uniform
//! intra-leg coupling) and nodes. A node is not an extra site: it is the
//! set of bonds attaching one anchor site (the end of the input leg) to
//! an end site of each bonded output leg.
//!
//! Global indexing: legs occupy consecutive index ranges in declaration
//! order, sites inside a leg in order `j = 1..=length`. The input leg is
//! declared first by every builder, so the reflection domain `[1, M-1]`
//! is a contiguous prefix of the global index space.

use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};

/// One open chain of the network.
#[derive(Debug, Clone, PartialEq)]
pub struct LegSpec {
    pub id: String,
    /// Number of sites, `>= 1`.
    pub length: usize,
    /// Intra-leg hopping, `> 0` (energy units).
    pub coupling: f64,
}

/// Which end site of a leg a node bond attaches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegEnd {
    First,
    Last,
}

/// One bond of a node: attaches the node's anchor site to an end of `leg`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeBond {
    pub leg: String,
    pub end: LegEnd,
    /// Node coupling, `>= 0`. Zero means disconnected (allowed, so coupling
    /// sweeps can include the axes).
    pub coupling: f64,
}

/// A junction: the anchor site `(leg, j)` bonds to each entry of `bonds`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub id: String,
    /// `(leg id, 1-based site position)` on the input side.
    pub anchor: (String, usize),
    pub bonds: Vec<NodeBond>,
}

/// Outcome of [`SpinNetwork::validate`]: structural violations plus a
/// connectivity flag computed over bonds with nonzero coupling.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub connected: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Immutable leg/node topology with its global site indexing.
#[derive(Debug, Clone)]
pub struct SpinNetwork {
    legs: Vec<LegSpec>,
    nodes: Vec<NodeSpec>,
    offsets: Vec<usize>,
    index: HashMap<String, usize>,
    site_count: usize,
}

impl SpinNetwork {
    /// Assemble a network from explicit parts. Only demands what the index
    /// map itself needs (unique leg ids, resolvable references); use
    /// [`validate`](Self::validate) for the full invariant report.
    pub fn from_parts(legs: Vec<LegSpec>, nodes: Vec<NodeSpec>) -> Result<Self> {
        let mut index = HashMap::new();
        let mut offsets = Vec::with_capacity(legs.len());
        let mut total = 0usize;
        for (i, leg) in legs.iter().enumerate() {
            if index.insert(leg.id.clone(), i).is_some() {
                return Err(Error::InvalidNetwork(format!("duplicate leg id `{}`", leg.id)));
            }
            offsets.push(total);
            total += leg.length;
        }
        for node in &nodes {
            if !index.contains_key(&node.anchor.0) {
                return Err(Error::UnknownLeg(node.anchor.0.clone()));
            }
            for bond in &node.bonds {
                if !index.contains_key(&bond.leg) {
                    return Err(Error::UnknownLeg(bond.leg.clone()));
                }
            }
        }
        Ok(Self { legs, nodes, offsets, index, site_count: total })
    }

    /// Star network: input leg `A` (length `input_len`, coupling `coupling`)
    /// joined at its last site to the first site of `arms` identical output
    /// legs `B1..Bm` (length `arm_len`), each bond carrying `node_coupling`.
    pub fn star(
        arms: usize,
        input_len: usize,
        arm_len: usize,
        coupling: f64,
        node_coupling: f64,
    ) -> Result<Self> {
        if arms < 1 {
            return Err(Error::InvalidNetwork("star needs at least one output leg".into()));
        }
        check_length("input leg", input_len)?;
        check_length("output leg", arm_len)?;
        check_coupling("leg coupling", coupling)?;
        check_node_coupling(node_coupling)?;

        let mut legs = vec![LegSpec { id: "A".into(), length: input_len, coupling }];
        let mut bonds = Vec::with_capacity(arms);
        for p in 1..=arms {
            let id = format!("B{p}");
            legs.push(LegSpec { id: id.clone(), length: arm_len, coupling });
            bonds.push(NodeBond { leg: id, end: LegEnd::First, coupling: node_coupling });
        }
        let node = NodeSpec { id: "O".into(), anchor: ("A".into(), input_len), bonds };
        Self::from_parts(legs, vec![node])
    }

    /// Y-beam: legs `A`, `B`, `C` with independent lengths and couplings;
    /// the node joins `(A, M)` to `(B, 1)` with `j_nb` and to `(C, 1)`
    /// with `j_nc`.
    #[allow(clippy::too_many_arguments)]
    pub fn ybeam(
        input_len: usize,
        len_b: usize,
        len_c: usize,
        j_a: f64,
        j_b: f64,
        j_c: f64,
        j_nb: f64,
        j_nc: f64,
    ) -> Result<Self> {
        check_length("leg A", input_len)?;
        check_length("leg B", len_b)?;
        check_length("leg C", len_c)?;
        check_coupling("J_A", j_a)?;
        check_coupling("J_B", j_b)?;
        check_coupling("J_C", j_c)?;
        check_node_coupling(j_nb)?;
        check_node_coupling(j_nc)?;

        let legs = vec![
            LegSpec { id: "A".into(), length: input_len, coupling: j_a },
            LegSpec { id: "B".into(), length: len_b, coupling: j_b },
            LegSpec { id: "C".into(), length: len_c, coupling: j_c },
        ];
        let node = NodeSpec {
            id: "O".into(),
            anchor: ("A".into(), input_len),
            bonds: vec![
                NodeBond { leg: "B".into(), end: LegEnd::First, coupling: j_nb },
                NodeBond { leg: "C".into(), end: LegEnd::First, coupling: j_nc },
            ],
        };
        Self::from_parts(legs, vec![node])
    }

    /// Two-Y interferometer: input `A`, arms `B` and `C` with
    /// `len(C) = len_b + delta`, output `D`. Node 1 joins `(A, N_A)` to the
    /// arm heads, node 2 joins `(D, 1)` to the arm tails; all four node
    /// bonds carry `node_coupling`, all legs `coupling`.
    pub fn interferometer(
        len_a: usize,
        len_b: usize,
        delta: i64,
        len_d: usize,
        coupling: f64,
        node_coupling: f64,
    ) -> Result<Self> {
        check_length("leg A", len_a)?;
        check_length("leg B", len_b)?;
        check_length("leg D", len_d)?;
        check_coupling("J", coupling)?;
        check_node_coupling(node_coupling)?;
        let len_c = len_b as i64 + delta;
        if len_c < 1 {
            return Err(Error::InvalidNetwork(format!(
                "path difference {delta} leaves leg C with {len_c} sites"
            )));
        }
        let len_c = len_c as usize;

        let legs = vec![
            LegSpec { id: "A".into(), length: len_a, coupling },
            LegSpec { id: "B".into(), length: len_b, coupling },
            LegSpec { id: "C".into(), length: len_c, coupling },
            LegSpec { id: "D".into(), length: len_d, coupling },
        ];
        let nodes = vec![
            NodeSpec {
                id: "O1".into(),
                anchor: ("A".into(), len_a),
                bonds: vec![
                    NodeBond { leg: "B".into(), end: LegEnd::First, coupling: node_coupling },
                    NodeBond { leg: "C".into(), end: LegEnd::First, coupling: node_coupling },
                ],
            },
            NodeSpec {
                id: "O2".into(),
                anchor: ("D".into(), 1),
                bonds: vec![
                    NodeBond { leg: "B".into(), end: LegEnd::Last, coupling: node_coupling },
                    NodeBond { leg: "C".into(), end: LegEnd::Last, coupling: node_coupling },
                ],
            },
        ];
        Self::from_parts(legs, nodes)
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    pub fn legs(&self) -> &[LegSpec] {
        &self.legs
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn leg(&self, id: &str) -> Option<&LegSpec> {
        self.index.get(id).map(|&i| &self.legs[i])
    }

    /// Global id of site `j` (1-based) on `leg`.
    pub fn site_index(&self, leg: &str, j: usize) -> Result<usize> {
        let &i = self.index.get(leg).ok_or_else(|| Error::UnknownLeg(leg.into()))?;
        if j < 1 || j > self.legs[i].length {
            return Err(Error::InvalidParameter(format!(
                "site {j} outside leg `{leg}` of length {}",
                self.legs[i].length
            )));
        }
        Ok(self.offsets[i] + j - 1)
    }

    /// Inverse of [`site_index`](Self::site_index).
    pub fn site_locate(&self, site: usize) -> Result<(&str, usize)> {
        if site >= self.site_count {
            return Err(Error::SiteOutOfRange { site, count: self.site_count });
        }
        let i = match self.offsets.binary_search(&site) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        Ok((&self.legs[i].id, site - self.offsets[i] + 1))
    }

    /// Global index range covered by a leg.
    pub fn leg_sites(&self, leg: &str) -> Result<Range<usize>> {
        let &i = self.index.get(leg).ok_or_else(|| Error::UnknownLeg(leg.into()))?;
        Ok(self.offsets[i]..self.offsets[i] + self.legs[i].length)
    }

    /// The leg carrying the input wave packet: anchor leg of the first node,
    /// or the only leg of a node-free network.
    pub fn input_leg(&self) -> Option<&str> {
        match self.nodes.first() {
            Some(node) => Some(&node.anchor.0),
            None if self.legs.len() == 1 => Some(&self.legs[0].id),
            None => None,
        }
    }

    fn end_site(&self, leg: &str, end: LegEnd) -> Result<usize> {
        let spec = self.leg(leg).ok_or_else(|| Error::UnknownLeg(leg.into()))?;
        match end {
            LegEnd::First => self.site_index(leg, 1),
            LegEnd::Last => self.site_index(leg, spec.length),
        }
    }

    /// All structural bonds as `(site, site, weight)` with `site_a < site_b`.
    /// Intra-leg bonds first (in leg order), then node bonds. Zero-weight
    /// node bonds are kept: they are part of the declared structure.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut edges = Vec::new();
        for (i, leg) in self.legs.iter().enumerate() {
            for j in 0..leg.length.saturating_sub(1) {
                let a = self.offsets[i] + j;
                edges.push((a, a + 1, leg.coupling));
            }
        }
        for node in &self.nodes {
            let anchor = match self.site_index(&node.anchor.0, node.anchor.1) {
                Ok(s) => s,
                Err(_) => continue,
            };
            for bond in &node.bonds {
                if let Ok(s) = self.end_site(&bond.leg, bond.end) {
                    let (a, b) = if anchor < s { (anchor, s) } else { (s, anchor) };
                    edges.push((a, b, bond.coupling));
                }
            }
        }
        edges
    }

    /// Check every structural invariant and compute connectivity over the
    /// bonds with nonzero coupling. Report-style: never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        for leg in &self.legs {
            if leg.length < 1 {
                violations.push(format!("leg `{}`: length must be >= 1", leg.id));
            }
            if !(leg.coupling > 0.0) || !leg.coupling.is_finite() {
                violations.push(format!("leg `{}`: coupling must be > 0", leg.id));
            }
        }

        // Each leg end may participate in at most one node bond.
        let mut used_ends: HashMap<usize, (String, String)> = HashMap::new();
        for node in &self.nodes {
            let anchor = match self.site_index(&node.anchor.0, node.anchor.1) {
                Ok(s) => s,
                Err(_) => {
                    violations.push(format!(
                        "node `{}`: anchor ({}, {}) does not exist",
                        node.id, node.anchor.0, node.anchor.1
                    ));
                    continue;
                }
            };
            for bond in &node.bonds {
                if !(bond.coupling >= 0.0) || !bond.coupling.is_finite() {
                    violations.push(format!(
                        "node `{}`: coupling to `{}` must be >= 0",
                        node.id, bond.leg
                    ));
                }
                match self.end_site(&bond.leg, bond.end) {
                    Ok(site) => {
                        if site == anchor {
                            violations.push(format!(
                                "node `{}`: bond to `{}` attaches to its own anchor",
                                node.id, bond.leg
                            ));
                        } else if let Some((prev_node, prev_leg)) = used_ends
                            .insert(site, (node.id.clone(), bond.leg.clone()))
                        {
                            violations.push(format!(
                                "leg `{}` end used by both node `{}` and node `{}` (leg `{}`)",
                                bond.leg, prev_node, node.id, prev_leg
                            ));
                        }
                    }
                    Err(_) => violations.push(format!(
                        "node `{}`: bond references missing leg `{}`",
                        node.id, bond.leg
                    )),
                }
            }
        }

        let expected_edges: usize = self
            .legs
            .iter()
            .map(|l| l.length.saturating_sub(1))
            .sum::<usize>()
            + self.nodes.iter().map(|n| n.bonds.len()).sum::<usize>();
        let edges = self.edges();
        if edges.len() != expected_edges {
            violations.push(format!(
                "edge count {} does not match expected {}",
                edges.len(),
                expected_edges
            ));
        }

        ValidationReport { violations, connected: self.is_connected(&edges) }
    }

    fn is_connected(&self, edges: &[(usize, usize, f64)]) -> bool {
        if self.site_count == 0 {
            return true;
        }
        let mut adjacency = vec![Vec::new(); self.site_count];
        for &(a, b, w) in edges {
            if w != 0.0 {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        let mut seen = vec![false; self.site_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(s) = stack.pop() {
            for &n in &adjacency[s] {
                if !seen[n] {
                    seen[n] = true;
                    count += 1;
                    stack.push(n);
                }
            }
        }
        count == self.site_count
    }
}

fn check_length(what: &str, len: usize) -> Result<()> {
    if len < 1 {
        return Err(Error::InvalidNetwork(format!("{what}: length must be >= 1")));
    }
    Ok(())
}

fn check_coupling(what: &str, j: f64) -> Result<()> {
    if !(j > 0.0) || !j.is_finite() {
        return Err(Error::InvalidNetwork(format!("{what}: coupling must be > 0, got {j}")));
    }
    Ok(())
}

fn check_node_coupling(j: f64) -> Result<()> {
    if !(j >= 0.0) || !j.is_finite() {
        return Err(Error::InvalidNetwork(format!("node coupling must be >= 0, got {j}")));
    }
    Ok(())
}
