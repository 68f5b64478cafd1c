//! Gateway-rooted backhaul forests over a deployment plan, and the
//! bottleneck-limited per-cell rate of each multi-hop chain.
//!
//! Every platform node gets exactly one upstream link toward a gateway,
//! chosen to minimize (hop count, then total path length), with ties broken
//! by lexicographic gateway id. Platform-to-platform feasibility edges
//! connect only consecutive nodes along the route. The rate a chain
//! sustains per supported cell is `min_i capacity_i / load_i` over its
//! links, where a link's load counts the cells whose traffic traverses it;
//! the arg-min link is the bottleneck.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::coverage::HapsNode;
use crate::fso::{link_budget, AtmosphereModel, FsoConfig, FsoError, FsoTerminalParams};
use crate::geo::{self, SlantGeometry};
use crate::route::GatewaySite;
use thiserror::Error;

/// Terminal profile label used for platform-to-platform links.
pub const H2H_TERMINAL_LABEL: &str = "h2h";

#[derive(Debug, Error)]
pub enum BackhaulError {
    #[error("no platform nodes to connect")]
    EmptyPlan,
    #[error("no gateways available")]
    NoGateways,
    #[error("stranded nodes unable to reach any gateway: {}", .0.join(", "))]
    Stranded(Vec<String>),
    #[error(transparent)]
    Fso(#[from] FsoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LinkKind {
    #[serde(rename = "H2G")]
    H2G,
    #[serde(rename = "H2H")]
    H2H,
}

/// One upstream link: `node_id`'s traffic exits toward `upstream_id`
/// (a parent node, or the gateway for H2G links).
#[derive(Debug, Clone, Serialize)]
pub struct BackhaulLink {
    pub id: String,
    pub kind: LinkKind,
    pub node_id: String,
    pub upstream_id: String,
    pub gateway_id: String,
    pub geometry: SlantGeometry,
    pub capacity_bps: f64,
    /// Cells whose traffic traverses this link (a weight sum; 1 per cell
    /// under the uniform default).
    pub load: f64,
}

/// The forest: one upstream link per node, indexed in node order.
#[derive(Debug, Clone)]
pub struct BackhaulTopology {
    pub nodes: Vec<HapsNode>,
    pub gateways: Vec<GatewaySite>,
    pub links: Vec<BackhaulLink>,
    /// Parent node index per node (None when the node uplinks straight to
    /// its gateway).
    pub parent: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Parent {
    Gateway(usize),
    Node(usize),
}

struct Candidate {
    hops: u32,
    length_km: f64,
    gateway_id: String,
    gateway_idx: usize,
    node_idx: usize,
    parent: Parent,
}

impl Candidate {
    fn key(&self) -> (u32, f64, &str, usize) {
        (self.hops, self.length_km, &self.gateway_id, self.node_idx)
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        let (h1, l1, g1, n1) = self.key();
        let (h2, l2, g2, n2) = other.key();
        h1.cmp(&h2)
            .then(l1.total_cmp(&l2))
            .then(g1.cmp(g2))
            .then(n1.cmp(&n2))
    }
}

/// Build the backhaul forest with uniform per-cell demand.
pub fn build_topology(
    nodes: &[HapsNode],
    gateways: &[GatewaySite],
    h2g_max_slant_km: f64,
    h2h_max_range_km: f64,
    fso: &FsoConfig,
) -> Result<BackhaulTopology, BackhaulError> {
    build_topology_weighted(nodes, gateways, h2g_max_slant_km, h2h_max_range_km, fso, None)
}

/// Build the backhaul forest. `demand_weights`, when given, must align with
/// `nodes` and replaces the uniform one-cell-per-node load counting by a
/// weight sum.
pub fn build_topology_weighted(
    nodes: &[HapsNode],
    gateways: &[GatewaySite],
    h2g_max_slant_km: f64,
    h2h_max_range_km: f64,
    fso: &FsoConfig,
    demand_weights: Option<&[f64]>,
) -> Result<BackhaulTopology, BackhaulError> {
    if nodes.is_empty() {
        return Err(BackhaulError::EmptyPlan);
    }
    if gateways.is_empty() {
        return Err(BackhaulError::NoGateways);
    }

    // Feasible H2G attachments per node.
    let mut heap: BinaryHeap<std::cmp::Reverse<Candidate>> = BinaryHeap::new();
    for (ni, node) in nodes.iter().enumerate() {
        for (gi, gw) in gateways.iter().enumerate() {
            let ground = geo::great_circle_distance(node.nadir, gw.location);
            let geometry = geo::slant_range(ground, node.altitude_km);
            if geometry.slant_range_km <= h2g_max_slant_km {
                heap.push(std::cmp::Reverse(Candidate {
                    hops: 1,
                    length_km: geometry.slant_range_km,
                    gateway_id: gw.id.clone(),
                    gateway_idx: gi,
                    node_idx: ni,
                    parent: Parent::Gateway(gi),
                }));
            }
        }
    }

    // H2H feasibility: consecutive nodes along the route only.
    let h2h_dist = |i: usize, j: usize| geo::great_circle_distance(nodes[i].nadir, nodes[j].nadir);

    let mut settled: Vec<Option<Candidate>> = (0..nodes.len()).map(|_| None).collect();
    while let Some(std::cmp::Reverse(cand)) = heap.pop() {
        let ni = cand.node_idx;
        if settled[ni].is_some() {
            continue;
        }
        let hops = cand.hops;
        let length = cand.length_km;
        let gateway_id = cand.gateway_id.clone();
        let gateway_idx = cand.gateway_idx;
        settled[ni] = Some(cand);
        for nj in [ni.wrapping_sub(1), ni + 1] {
            if nj >= nodes.len() || settled[nj].is_some() {
                continue;
            }
            let d = h2h_dist(ni, nj);
            if d <= h2h_max_range_km {
                heap.push(std::cmp::Reverse(Candidate {
                    hops: hops + 1,
                    length_km: length + d,
                    gateway_id: gateway_id.clone(),
                    gateway_idx,
                    node_idx: nj,
                    parent: Parent::Node(ni),
                }));
            }
        }
    }

    let stranded: Vec<String> = settled
        .iter()
        .zip(nodes)
        .filter(|(s, _)| s.is_none())
        .map(|(_, n)| n.id.clone())
        .collect();
    if !stranded.is_empty() {
        return Err(BackhaulError::Stranded(stranded));
    }

    // Realize links with capacities from the link-budget model.
    let mut parent = vec![None; nodes.len()];
    let mut links = Vec::with_capacity(nodes.len());
    for (ni, node) in nodes.iter().enumerate() {
        let cand = settled[ni].as_ref().unwrap();
        let (kind, upstream_id, geometry, params): (_, _, _, &FsoTerminalParams) =
            match cand.parent {
                Parent::Gateway(gi) => {
                    let gw = &gateways[gi];
                    let ground = geo::great_circle_distance(node.nadir, gw.location);
                    (
                        LinkKind::H2G,
                        gw.id.clone(),
                        geo::slant_range(ground, node.altitude_km),
                        fso.terminal(&gw.terminal)?,
                    )
                }
                Parent::Node(pi) => {
                    parent[ni] = Some(pi);
                    (
                        LinkKind::H2H,
                        nodes[pi].id.clone(),
                        SlantGeometry::horizontal(h2h_dist(ni, pi)),
                        fso.terminal(H2H_TERMINAL_LABEL)?,
                    )
                }
            };
        let base_altitude = match kind {
            LinkKind::H2G => 0.0, // gateways sit at sea level
            LinkKind::H2H => node.altitude_km,
        };
        let budget = link_budget(params, &geometry, &fso.atmosphere, base_altitude);
        let prefix = match kind {
            LinkKind::H2G => "h2g",
            LinkKind::H2H => "h2h",
        };
        links.push(BackhaulLink {
            id: format!("{prefix}-{}", node.id),
            kind,
            node_id: node.id.clone(),
            upstream_id,
            gateway_id: cand.gateway_id.clone(),
            geometry,
            capacity_bps: budget.achievable_rate_bps,
            load: 0.0,
        });
    }

    let mut topology = BackhaulTopology {
        nodes: nodes.to_vec(),
        gateways: gateways.to_vec(),
        links,
        parent,
    };
    recompute_loads(&mut topology, demand_weights);
    Ok(topology)
}

/// Recompute per-link loads from the parent relation: a node's upstream
/// link carries its whole subtree.
pub fn recompute_loads(topology: &mut BackhaulTopology, demand_weights: Option<&[f64]>) {
    let n = topology.nodes.len();
    if let Some(w) = demand_weights {
        assert_eq!(w.len(), n, "demand weights must align with nodes");
    }
    let weight = |i: usize| demand_weights.map_or(1.0, |w| w[i]);

    let mut depth = vec![0usize; n];
    for i in 0..n {
        let mut d = 0;
        let mut cur = i;
        while let Some(p) = topology.parent[cur] {
            d += 1;
            cur = p;
        }
        depth[i] = d;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(depth[i]));

    let mut subtree: Vec<f64> = (0..n).map(weight).collect();
    for &i in &order {
        if let Some(p) = topology.parent[i] {
            subtree[p] += subtree[i];
        }
    }
    for i in 0..n {
        topology.links[i].load = subtree[i];
    }
}

/// Per-link detail in a bottleneck report.
#[derive(Debug, Clone, Serialize)]
pub struct LinkReport {
    pub id: String,
    pub kind: LinkKind,
    pub distance_km: f64,
    pub capacity_bps: f64,
    pub load: f64,
    pub ratio_bps: f64,
}

/// Bottleneck analysis of one gateway-rooted tree.
#[derive(Debug, Clone, Serialize)]
pub struct BottleneckReport {
    pub gateway_id: String,
    pub nodes: Vec<String>,
    pub links: Vec<LinkReport>,
    pub bottleneck_link: String,
    pub per_cell_rate_bps: f64,
}

/// Bottleneck-limited per-cell rate of every gateway-rooted tree, sorted by
/// gateway id. The bottleneck is the arg-min of capacity/load; the first
/// link in node order wins exact ties.
pub fn bottleneck_rate(topology: &BackhaulTopology) -> Vec<BottleneckReport> {
    let mut gateway_ids: Vec<&str> = topology
        .links
        .iter()
        .map(|l| l.gateway_id.as_str())
        .collect();
    gateway_ids.sort_unstable();
    gateway_ids.dedup();

    let mut reports = Vec::with_capacity(gateway_ids.len());
    for gw in gateway_ids {
        let links: Vec<&BackhaulLink> = topology
            .links
            .iter()
            .filter(|l| l.gateway_id == gw)
            .collect();
        let mut best: Option<(&BackhaulLink, f64)> = None;
        let mut link_reports = Vec::with_capacity(links.len());
        for link in &links {
            let ratio = link.capacity_bps / link.load;
            link_reports.push(LinkReport {
                id: link.id.clone(),
                kind: link.kind,
                distance_km: link.geometry.slant_range_km,
                capacity_bps: link.capacity_bps,
                load: link.load,
                ratio_bps: ratio,
            });
            if best.map_or(true, |(_, b)| ratio < b) {
                best = Some((link, ratio));
            }
        }
        let (bottleneck, per_cell) = best.expect("tree has at least one link");
        reports.push(BottleneckReport {
            gateway_id: gw.to_string(),
            nodes: links.iter().map(|l| l.node_id.clone()).collect(),
            links: link_reports,
            bottleneck_link: bottleneck.id.clone(),
            per_cell_rate_bps: per_cell,
        });
    }
    reports
}

/// Per-cell rate of a synthetic chain: one gateway uplink at
/// `h2g_slant_km`, then `n - 1` platform-to-platform hops of `spacing_km`
/// each, for n = 1..=`max_hops`. Emitted as (hops, per-cell rate) rows.
pub fn chain_sweep(
    h2g_params: &FsoTerminalParams,
    h2h_params: &FsoTerminalParams,
    atm: &AtmosphereModel,
    max_hops: u32,
    spacing_km: f64,
    h2g_slant_km: f64,
    altitude_km: f64,
) -> Result<Vec<(u32, f64)>, crate::geo::GeoError> {
    assert!(spacing_km > 0.0 && max_hops >= 1, "bad chain sweep request");
    let h2g_geometry = SlantGeometry::from_slant_and_altitude(h2g_slant_km, altitude_km)?;
    let c_h2g = link_budget(h2g_params, &h2g_geometry, atm, 0.0).achievable_rate_bps;
    let h2h_geometry = SlantGeometry::horizontal(spacing_km);
    let c_h2h = link_budget(h2h_params, &h2h_geometry, atm, altitude_km).achievable_rate_bps;

    let mut rows = Vec::with_capacity(max_hops as usize);
    for n in 1..=max_hops {
        // Chain loads: the gateway link carries all n cells, the i-th
        // platform hop carries the n - i cells behind it.
        let mut per_cell = c_h2g / n as f64;
        for i in 1..n {
            per_cell = per_cell.min(c_h2h / (n - i) as f64);
        }
        rows.push((n, per_cell));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fso::AtmosphereModel;
    use crate::geo::GeoPoint;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeMap;

    const DEG_KM: f64 = 2.0 * std::f64::consts::PI * crate::geo::EARTH_RADIUS_KM / 360.0;

    fn assert_rel(actual: f64, expected: f64, rel: f64) {
        assert!(
            (actual - expected).abs() <= rel * expected.abs(),
            "expected {expected}, got {actual}"
        );
    }

    fn terminal(label: &str, sensitivity: f64) -> FsoTerminalParams {
        FsoTerminalParams {
            label: label.into(),
            transmit_power_dbm: 20.0,
            divergence_half_angle_rad: 20e-6,
            tx_aperture_diameter_m: 0.08,
            rx_aperture_diameter_m: 0.2,
            tx_efficiency: 0.8,
            rx_efficiency: 0.8,
            wavelength_nm: 1550.0,
            receiver_sensitivity_photons_per_bit: sensitivity,
        }
    }

    /// Calibrated profile set matching the shipped defaults.
    fn calibrated_config() -> FsoConfig {
        let mut terminals = BTreeMap::new();
        terminals.insert("h2g".to_string(), terminal("h2g", 2.3522840586e3));
        terminals.insert("h2h".to_string(), terminal("h2h", 1.1750812476e5));
        FsoConfig {
            calibrated: true,
            calibration_note: None,
            atmosphere: AtmosphereModel {
                sea_level_attenuation_db_per_km: 0.43,
                scale_height_km: 8.5,
                condition: "clear-sky".into(),
            },
            terminals,
        }
    }

    fn node_at(idx: usize, ground_km: f64) -> HapsNode {
        HapsNode {
            id: format!("haps-{:03}", idx),
            nadir: GeoPoint::new(0.0, ground_km / DEG_KM).unwrap(),
            nadir_s_km: ground_km,
            altitude_km: 20.0,
            footprint_radius_km: 40.0,
        }
    }

    fn gateway_at(id: &str, ground_km: f64) -> GatewaySite {
        GatewaySite {
            id: id.into(),
            location: GeoPoint::new(0.0, ground_km / DEG_KM).unwrap(),
            terminal: "h2g".into(),
        }
    }

    /// Ground offset that puts a platform at the given slant range from a
    /// gateway underneath the chain.
    fn ground_for_slant(slant_km: f64) -> f64 {
        (slant_km * slant_km - 400.0).sqrt()
    }

    #[test]
    fn single_node_single_gateway() {
        let nodes = vec![node_at(1, 30.0)];
        let gws = vec![gateway_at("gw-a", 0.0)];
        let topo = build_topology(&nodes, &gws, 150.0, 100.0, &calibrated_config()).unwrap();
        assert_eq!(topo.links.len(), 1);
        assert_eq!(topo.links[0].kind, LinkKind::H2G);
        assert_eq!(topo.links[0].load, 1.0);
        assert_eq!(topo.links[0].gateway_id, "gw-a");
        let reports = bottleneck_rate(&topo);
        assert_eq!(reports.len(), 1);
        assert_rel(
            reports[0].per_cell_rate_bps,
            topo.links[0].capacity_bps,
            1e-12,
        );
    }

    #[test]
    fn three_node_chain_loads() {
        // Gateway near node 1 only; nodes 80 km apart.
        let nodes = vec![node_at(1, 30.0), node_at(2, 110.0), node_at(3, 190.0)];
        let gws = vec![gateway_at("gw-a", 0.0)];
        // Node 1 slant = sqrt(30^2+20^2) = 36.06; others unreachable directly.
        let topo = build_topology(&nodes, &gws, 50.0, 100.0, &calibrated_config()).unwrap();
        assert_eq!(topo.links[0].kind, LinkKind::H2G);
        assert_eq!(topo.links[1].kind, LinkKind::H2H);
        assert_eq!(topo.links[2].kind, LinkKind::H2H);
        assert_eq!(topo.links[0].load, 3.0);
        assert_eq!(topo.links[1].load, 2.0);
        assert_eq!(topo.links[2].load, 1.0);
        assert_eq!(topo.parent, vec![None, Some(0), Some(1)]);
        // Loads strictly decrease toward the leaf.
        assert!(topo.links[0].load > topo.links[1].load);
        assert!(topo.links[1].load > topo.links[2].load);
    }

    #[test]
    fn unreachable_node_lists_ids() {
        let nodes = vec![node_at(1, 30.0), node_at(2, 4000.0)];
        let gws = vec![gateway_at("gw-a", 0.0)];
        match build_topology(&nodes, &gws, 50.0, 100.0, &calibrated_config()) {
            Err(BackhaulError::Stranded(ids)) => assert_eq!(ids, vec!["haps-002".to_string()]),
            other => panic!("expected stranded error, got {other:?}"),
        }
    }

    #[test]
    fn ties_break_by_lexicographic_gateway_id() {
        // One node equidistant from two gateways.
        let nodes = vec![node_at(1, 100.0)];
        let gws = vec![gateway_at("gw-b", 40.0), gateway_at("gw-a", 160.0)];
        let topo = build_topology(&nodes, &gws, 200.0, 100.0, &calibrated_config()).unwrap();
        assert_eq!(topo.links[0].gateway_id, "gw-a");
    }

    #[test]
    fn hops_win_over_length() {
        // Node 2 could reach gw-b directly with a long slant, or relay
        // through node 1 for a shorter total; fewer hops should win.
        let nodes = vec![node_at(1, 30.0), node_at(2, 110.0)];
        let gws = vec![gateway_at("gw-a", 0.0)];
        let topo = build_topology(&nodes, &gws, 150.0, 100.0, &calibrated_config()).unwrap();
        // slant for node 2: sqrt(110^2 + 20^2) = 111.8 <= 150, direct.
        assert_eq!(topo.links[1].kind, LinkKind::H2G);
        assert_eq!(topo.links[0].load, 1.0);
        assert_eq!(topo.links[1].load, 1.0);
    }

    #[test]
    fn two_hop_anchor_rate_and_bottleneck() {
        let g1 = ground_for_slant(44.0);
        let nodes = vec![node_at(1, g1), node_at(2, g1 + 80.0)];
        let gws = vec![gateway_at("gw-a", 0.0)];
        let topo = build_topology(&nodes, &gws, 100.0, 100.0, &calibrated_config()).unwrap();
        assert_eq!(topo.links[0].kind, LinkKind::H2G);
        assert_rel(topo.links[0].geometry.slant_range_km, 44.0, 1e-9);
        assert_eq!(topo.links[1].kind, LinkKind::H2H);
        assert_rel(topo.links[1].geometry.slant_range_km, 80.0, 1e-6);

        let reports = bottleneck_rate(&topo);
        assert_eq!(reports.len(), 1);
        assert_rel(reports[0].per_cell_rate_bps, 7.44e9, 1e-4);
        assert_eq!(reports[0].bottleneck_link, "h2h-haps-002");
    }

    #[test]
    fn long_chain_per_cell_rate_closed_form() {
        // Huge gateway capacity: per-cell rate is C_h2h / (N - 1).
        let config = calibrated_config();
        let n = 5;
        let g1 = ground_for_slant(25.0);
        let mut nodes = Vec::new();
        for i in 0..n {
            nodes.push(node_at(i + 1, g1 + 80.0 * i as f64));
        }
        let gws = vec![gateway_at("gw-a", 0.0)];
        let topo = build_topology(&nodes, &gws, 26.0, 100.0, &config).unwrap();
        let c_h2h = topo.links[1].capacity_bps;
        let reports = bottleneck_rate(&topo);
        assert_rel(reports[0].per_cell_rate_bps, c_h2h / (n - 1) as f64, 1e-9);
    }

    #[test]
    fn weighted_loads_sum_demand() {
        let nodes = vec![node_at(1, 30.0), node_at(2, 110.0), node_at(3, 190.0)];
        let gws = vec![gateway_at("gw-a", 0.0)];
        let topo = build_topology_weighted(
            &nodes,
            &gws,
            50.0,
            100.0,
            &calibrated_config(),
            Some(&[1.0, 2.5, 0.5]),
        )
        .unwrap();
        assert_eq!(topo.links[0].load, 4.0);
        assert_eq!(topo.links[1].load, 3.0);
        assert_eq!(topo.links[2].load, 0.5);
    }

    #[test]
    fn leaf_removal_never_decreases_surviving_ratios() {
        let config = calibrated_config();
        let g1 = ground_for_slant(44.0);
        let nodes: Vec<HapsNode> = (0..6).map(|i| node_at(i + 1, g1 + 80.0 * i as f64)).collect();
        let gws = vec![gateway_at("gw-a", 0.0)];
        let full = build_topology(&nodes, &gws, 100.0, 100.0, &config).unwrap();
        let trimmed =
            build_topology(&nodes[..5], &gws, 100.0, 100.0, &config).unwrap();
        let full_rate = bottleneck_rate(&full)[0].per_cell_rate_bps;
        let trimmed_rate = bottleneck_rate(&trimmed)[0].per_cell_rate_bps;
        assert!(trimmed_rate >= full_rate);
        for (a, b) in trimmed.links.iter().zip(&full.links) {
            assert!(a.capacity_bps / a.load >= b.capacity_bps / b.load - 1e-9);
        }
    }

    #[test]
    fn forest_invariants_hold() {
        let config = calibrated_config();
        let nodes: Vec<HapsNode> = (0..8).map(|i| node_at(i + 1, 30.0 + 80.0 * i as f64)).collect();
        let gws = vec![gateway_at("gw-a", 0.0), gateway_at("gw-b", 620.0)];
        let topo = build_topology(&nodes, &gws, 150.0, 100.0, &config).unwrap();
        // Exactly one upstream link per node.
        assert_eq!(topo.links.len(), topo.nodes.len());
        // Loads strictly decrease along any root path toward the leaf.
        for (i, link) in topo.links.iter().enumerate() {
            if let Some(p) = topo.parent[i] {
                assert!(topo.links[p].load > link.load);
                assert_eq!(topo.links[p].gateway_id, link.gateway_id);
            }
        }
    }

    /// Brute-force oracle: loads recomputed by walking every node's path to
    /// the root, per-cell rate by exhaustive min over capacity/load.
    fn oracle_per_cell(topology: &BackhaulTopology) -> BTreeMap<String, (f64, String)> {
        let n = topology.nodes.len();
        let mut counts = vec![0u64; n];
        for i in 0..n {
            let mut cur = i;
            loop {
                counts[cur] += 1;
                match topology.parent[cur] {
                    Some(p) => cur = p,
                    None => break,
                }
            }
        }
        let mut out: BTreeMap<String, (f64, String)> = BTreeMap::new();
        for (i, link) in topology.links.iter().enumerate() {
            let ratio = link.capacity_bps / counts[i] as f64;
            out.entry(link.gateway_id.clone())
                .and_modify(|(best, id)| {
                    if ratio < *best {
                        *best = ratio;
                        *id = link.id.clone();
                    }
                })
                .or_insert((ratio, link.id.clone()));
        }
        out
    }

    #[test]
    fn bottleneck_matches_brute_force_on_random_trees() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0040);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12usize);
            let mut parent: Vec<Option<usize>> = Vec::with_capacity(n);
            let mut gateway_of: Vec<usize> = Vec::with_capacity(n);
            let n_gws = rng.gen_range(1..=3usize);
            for i in 0..n {
                if i == 0 || rng.gen_bool(0.4) {
                    parent.push(None);
                    gateway_of.push(rng.gen_range(0..n_gws));
                } else {
                    let p = rng.gen_range(0..i);
                    parent.push(Some(p));
                    gateway_of.push(gateway_of[p]);
                }
            }
            let nodes: Vec<HapsNode> = (0..n).map(|i| node_at(i + 1, i as f64)).collect();
            let gateways: Vec<GatewaySite> = (0..n_gws)
                .map(|g| gateway_at(&format!("gw-{g}"), 0.0))
                .collect();
            let links: Vec<BackhaulLink> = (0..n)
                .map(|i| BackhaulLink {
                    id: format!("link-{i}"),
                    kind: if parent[i].is_none() {
                        LinkKind::H2G
                    } else {
                        LinkKind::H2H
                    },
                    node_id: nodes[i].id.clone(),
                    upstream_id: parent[i]
                        .map(|p| nodes[p].id.clone())
                        .unwrap_or_else(|| format!("gw-{}", gateway_of[i])),
                    gateway_id: format!("gw-{}", gateway_of[i]),
                    geometry: SlantGeometry::horizontal(1.0),
                    capacity_bps: rng.gen_range(1e6..1e12),
                    load: 0.0,
                })
                .collect();
            let mut topo = BackhaulTopology {
                nodes,
                gateways,
                links,
                parent,
            };
            recompute_loads(&mut topo, None);

            let oracle = oracle_per_cell(&topo);
            for report in bottleneck_rate(&topo) {
                let (rate, link_id) = &oracle[&report.gateway_id];
                assert_eq!(report.per_cell_rate_bps, *rate, "per-cell rate mismatch");
                assert_eq!(&report.bottleneck_link, link_id, "arg-min link mismatch");
            }
        }
    }

    #[test]
    fn chain_sweep_matches_anchors_and_monotone() {
        let config = calibrated_config();
        let h2g = config.terminal("h2g").unwrap();
        let h2h = config.terminal("h2h").unwrap();

        // Single hop at the long-slant anchor distance.
        let rows = chain_sweep(h2g, h2h, &config.atmosphere, 1, 80.0, 121.0, 20.0).unwrap();
        assert_rel(rows[0].1, 3.5e9, 1e-4);

        // Two hops at the short-slant anchor geometry.
        let rows = chain_sweep(h2g, h2h, &config.atmosphere, 2, 80.0, 44.0, 20.0).unwrap();
        assert_rel(rows[1].1, 7.44e9, 1e-4);

        // Per-cell rate never rises with hop count.
        let rows = chain_sweep(h2g, h2h, &config.atmosphere, 10, 80.0, 44.0, 20.0).unwrap();
        assert_eq!(rows.len(), 10);
        for pair in rows.windows(2) {
            assert!(pair[1].1 <= pair[0].1);
        }
    }

    #[test]
    fn bottleneck_identity_switches_with_h2g_length() {
        let config = calibrated_config();
        let mut kinds = Vec::new();
        for d in 20..=300 {
            let g1 = ground_for_slant(d as f64 + 1e-9);
            let nodes = vec![node_at(1, g1), node_at(2, g1 + 80.0)];
            let gws = vec![gateway_at("gw-a", 0.0)];
            let topo =
                build_topology(&nodes, &gws, d as f64 + 1e-6, 100.0, &config).unwrap();
            let report = &bottleneck_rate(&topo)[0];
            kinds.push(if report.bottleneck_link.starts_with("h2g") {
                LinkKind::H2G
            } else {
                LinkKind::H2H
            });
        }
        assert_eq!(kinds.first(), Some(&LinkKind::H2H));
        assert_eq!(kinds.last(), Some(&LinkKind::H2G));
        // Single switch: H2H* then H2G*.
        let switch_count = kinds.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(switch_count, 1);
    }
}
