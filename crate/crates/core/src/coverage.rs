//! Placement of platform footprints along a route so that target stretches
//! lie inside footprint disks.
//!
//! Nadirs are constrained to the route itself: cells are strung along the
//! highway, and on-route placement makes the 1-D greedy provably minimal on
//! straight segments. Footprints are treated as the maximal *contiguous*
//! arc interval around the nadir; where a winding route re-enters the disk,
//! the re-entrant stretch is not credited during planning (conservative)
//! but is credited by [`verify_cover`], which checks plain point-to-nadir
//! distance against every node.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geo::{self, GeoPoint};
use crate::route::{ArcInterval, CoverageMask, RouteError, RoutePolyline};

/// Arc-length resolution of footprint-edge bisection, km.
const EDGE_RESOLUTION_KM: f64 = 1e-6;

/// Outward marching step when hunting a footprint edge, km. An excursion
/// outside the disk narrower than this is not resolved.
const MARCH_STEP_KM: f64 = 0.01;

/// Slack applied to "within radius" checks so that exact-boundary points
/// (footprint edge at s + r on a straight route) stay inside.
const RADIUS_SLACK_KM: f64 = 1e-9;

/// Slivers of uncovered target shorter than this are treated as covered;
/// protects the sweep from floating-point dust.
const MIN_SLIVER_KM: f64 = 1e-9;

/// One platform placement: nadir on the route at `nadir_s_km`.
#[derive(Debug, Clone, PartialEq)]
pub struct HapsNode {
    pub id: String,
    pub nadir: GeoPoint,
    pub nadir_s_km: f64,
    pub altitude_km: f64,
    pub footprint_radius_km: f64,
}

/// Output of [`plan_cover`]: ordered nodes plus the covered/target masks.
#[derive(Debug, Clone)]
pub struct DeploymentPlan {
    pub route_name: String,
    pub radius_km: f64,
    pub altitude_km: f64,
    pub nodes: Vec<HapsNode>,
    pub covered: CoverageMask,
    pub target: CoverageMask,
}

/// Maximal contiguous arc interval around `nadir_s_km` whose points all lie
/// within great-circle `radius_km` of the nadir point.
///
/// Any point within `radius_km` of the nadir *in arc length* is inside the
/// disk automatically (the chord between two route points never exceeds
/// their arc separation), so the interval always contains
/// `[s - r, s + r]` clamped to the route; the edges are pushed further out
/// by marching and bisection where the route curls back on itself.
pub fn footprint_interval(route: &RoutePolyline, nadir_s_km: f64, radius_km: f64) -> ArcInterval {
    assert!(radius_km > 0.0, "footprint radius must be positive");
    let nadir = route
        .point_at(nadir_s_km)
        .expect("nadir arc length must lie on the route");
    let length = route.length_km();

    let inside = |s: f64| -> bool {
        let p = route.point_at(s).expect("sample stays on route");
        geo::great_circle_distance(p, nadir) <= radius_km + RADIUS_SLACK_KM
    };

    let hi = extend_edge(
        (nadir_s_km + radius_km).min(length),
        length,
        MARCH_STEP_KM,
        &inside,
    );
    let lo = extend_edge(
        (nadir_s_km - radius_km).max(0.0),
        0.0,
        -MARCH_STEP_KM,
        &inside,
    );

    ArcInterval {
        start_km: lo.min(nadir_s_km),
        end_km: hi.max(nadir_s_km),
    }
}

/// March from `start` toward `limit` in steps of `step` while `inside`
/// holds, then bisect the crossing to [`EDGE_RESOLUTION_KM`].
fn extend_edge(start: f64, limit: f64, step: f64, inside: &dyn Fn(f64) -> bool) -> f64 {
    let clamp = |s: f64| {
        if step > 0.0 {
            s.min(limit)
        } else {
            s.max(limit)
        }
    };
    let mut last_inside = clamp(start);
    if !inside(last_inside) {
        // The analytic edge itself is the boundary; nothing to extend.
        return last_inside;
    }
    loop {
        if last_inside == limit {
            return limit;
        }
        let probe = clamp(last_inside + step);
        if inside(probe) {
            last_inside = probe;
            continue;
        }
        // Crossing between last_inside and probe: bisect.
        let (mut lo, mut hi) = (last_inside, probe);
        while (hi - lo).abs() > EDGE_RESOLUTION_KM {
            let mid = 0.5 * (lo + hi);
            if inside(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return lo;
    }
}

/// Farthest nadir position whose footprint still reaches back to cover the
/// point at `p_km`. Because arc separation bounds the chord, every nadir in
/// `[p, p + r]` qualifies, so the greedy can jump straight to the clamped
/// upper end; the bisection fallback only matters if that analytic argument
/// were ever violated numerically.
fn farthest_feasible_nadir(route: &RoutePolyline, p_km: f64, radius_km: f64) -> f64 {
    let length = route.length_km();
    let upper = (p_km + radius_km).min(length);
    let covers_p = |s: f64| footprint_interval(route, s, radius_km).start_km <= p_km;
    if covers_p(upper) {
        return upper;
    }
    let (mut lo, mut hi) = (p_km, upper);
    while hi - lo > EDGE_RESOLUTION_KM {
        let mid = 0.5 * (lo + hi);
        if covers_p(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Greedy sweep cover: repeatedly take the leftmost uncovered target point
/// and place a node at the farthest feasible nadir. Optimal on straight
/// routes (classic 1-D interval covering); deterministic for identical
/// inputs, ties broken toward larger nadir positions.
pub fn plan_cover(
    route: &RoutePolyline,
    target: &CoverageMask,
    radius_km: f64,
    altitude_km: f64,
) -> DeploymentPlan {
    assert!(radius_km > 0.0, "footprint radius must be positive");
    let mut remaining = target.drop_slivers(MIN_SLIVER_KM);
    let mut covered = CoverageMask::empty();
    let mut nodes = Vec::new();

    while let Some(p) = remaining.first_point_km() {
        let nadir_s = farthest_feasible_nadir(route, p, radius_km);
        let footprint = footprint_interval(route, nadir_s, radius_km);
        let nadir = route.point_at(nadir_s).expect("nadir on route");
        nodes.push(HapsNode {
            id: format!("haps-{:03}", nodes.len() + 1),
            nadir,
            nadir_s_km: nadir_s,
            altitude_km,
            footprint_radius_km: radius_km,
        });
        covered.insert(footprint);
        remaining = remaining.subtract(&covered, MIN_SLIVER_KM);
    }

    DeploymentPlan {
        route_name: route.name().to_string(),
        radius_km,
        altitude_km,
        nodes,
        covered,
        target: target.clone(),
    }
}

/// One uncovered sample found by [`verify_cover`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageViolation {
    pub s_km: f64,
    pub nearest_nadir_km: f64,
}

/// Independent coverage check report.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub samples: usize,
    pub violations: usize,
    pub first_violation: Option<CoverageViolation>,
}

impl CoverageReport {
    pub fn is_clean(&self) -> bool {
        self.violations == 0
    }
}

/// Sample the plan's target mask every `sample_step_km` and check each
/// sample lies within the footprint radius of some nadir. Violations are
/// reported, not thrown. This checker is deliberately independent of the
/// contiguous-interval bookkeeping the planner uses: it measures plain
/// point-to-nadir distance, so re-entrant coverage is credited here.
pub fn verify_cover(
    route: &RoutePolyline,
    plan: &DeploymentPlan,
    sample_step_km: f64,
) -> CoverageReport {
    assert!(sample_step_km > 0.0, "sample step must be positive");
    let radius = plan.radius_km;
    let mut samples = 0;
    let mut violations = 0;
    let mut first_violation = None;

    // Nadir arc positions, sorted by construction.
    let nadir_s: Vec<f64> = plan.nodes.iter().map(|n| n.nadir_s_km).collect();

    let mut check = |s: f64| {
        samples += 1;
        // Fast path: a nadir within `radius` in arc length covers the
        // sample outright (chord <= arc).
        let idx = nadir_s.partition_point(|&ns| ns < s);
        let arc_near = [idx.wrapping_sub(1), idx]
            .iter()
            .filter_map(|&i| nadir_s.get(i))
            .any(|&ns| (ns - s).abs() <= radius);
        if arc_near {
            return;
        }
        let p = route.point_at(s).expect("sample on route");
        let nearest = plan
            .nodes
            .iter()
            .map(|n| geo::great_circle_distance(p, n.nadir))
            .fold(f64::INFINITY, f64::min);
        if nearest > radius + RADIUS_SLACK_KM {
            violations += 1;
            if first_violation.is_none() {
                first_violation = Some(CoverageViolation {
                    s_km: s,
                    nearest_nadir_km: nearest,
                });
            }
        }
    };

    // Same dust guard as the planner: sub-sliver intervals created by
    // floating-point endpoints are not coverage obligations.
    for interval in plan.target.drop_slivers(MIN_SLIVER_KM).intervals() {
        let mut s = interval.start_km;
        while s < interval.end_km {
            check(s);
            s += sample_step_km;
        }
        check(interval.end_km);
    }

    CoverageReport {
        samples,
        violations,
        first_violation,
    }
}

// ---------------------------------------------------------------------------
// Plan file format
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct PlanNodeFile {
    id: String,
    lat: f64,
    lon: f64,
    nadir_s_km: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PlanFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generated_unix_s: Option<u64>,
    radius_km: f64,
    altitude_km: f64,
    nodes: Vec<PlanNodeFile>,
    count: usize,
}

/// Serialize a plan to its JSON wire form. `stamp_unix_s` adds a timestamp
/// field; reports are timestamp-free by default so identical inputs yield
/// identical bytes.
pub fn plan_to_json(plan: &DeploymentPlan, stamp_unix_s: Option<u64>) -> String {
    let file = PlanFile {
        generated_unix_s: stamp_unix_s,
        radius_km: plan.radius_km,
        altitude_km: plan.altitude_km,
        nodes: plan
            .nodes
            .iter()
            .map(|n| PlanNodeFile {
                id: n.id.clone(),
                lat: n.nadir.lat_deg(),
                lon: n.nadir.lon_deg(),
                nadir_s_km: n.nadir_s_km,
            })
            .collect(),
        count: plan.nodes.len(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("plan serializes");
    text.push('\n');
    text
}

/// Load the node list of a previously written plan file. The covered and
/// target masks are not part of the wire form; the returned plan carries
/// the node placements, radius, and altitude.
pub fn load_plan(path: &Path) -> Result<DeploymentPlan, RouteError> {
    let text = fs::read_to_string(path).map_err(|source| RouteError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: PlanFile = serde_json::from_str(&text).map_err(|e| RouteError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut nodes = Vec::with_capacity(file.nodes.len());
    for n in file.nodes {
        nodes.push(HapsNode {
            nadir: GeoPoint::new(n.lat, n.lon)?,
            id: n.id,
            nadir_s_km: n.nadir_s_km,
            altitude_km: file.altitude_km,
            footprint_radius_km: file.radius_km,
        });
    }
    Ok(DeploymentPlan {
        route_name: String::new(),
        radius_km: file.radius_km,
        altitude_km: file.altitude_km,
        nodes,
        covered: CoverageMask::empty(),
        target: CoverageMask::empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::route::RoutePolyline;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const DEG_KM: f64 = 2.0 * std::f64::consts::PI * crate::geo::EARTH_RADIUS_KM / 360.0;

    fn equator_route(length_km: f64) -> RoutePolyline {
        let a = GeoPoint::new(0.0, 0.0).unwrap();
        let b = GeoPoint::new(0.0, length_km / DEG_KM).unwrap();
        RoutePolyline::from_points("straight", vec![a, b]).unwrap()
    }

    /// Two east-west legs 20 km apart joined at the east end: points on the
    /// far leg sit within 40 km of a nadir on the near leg, but are not
    /// contiguous with it along the arc.
    fn hairpin_route() -> RoutePolyline {
        let leg = 300.0 / DEG_KM;
        let gap = 20.0 / DEG_KM;
        let v = vec![
            GeoPoint::new(0.0, 0.0).unwrap(),
            GeoPoint::new(0.0, leg).unwrap(),
            GeoPoint::new(gap, leg).unwrap(),
            GeoPoint::new(gap, 0.0).unwrap(),
        ];
        RoutePolyline::from_points("hairpin", v).unwrap()
    }

    #[test]
    fn footprint_on_straight_route_is_symmetric() {
        let route = equator_route(4504.0);
        let iv = footprint_interval(&route, 500.0, 40.0);
        assert!((iv.start_km - 460.0).abs() < 1e-4, "start {}", iv.start_km);
        assert!((iv.end_km - 540.0).abs() < 1e-4, "end {}", iv.end_km);
    }

    #[test]
    fn footprint_clamps_at_route_start() {
        let route = equator_route(4504.0);
        let iv = footprint_interval(&route, 10.0, 40.0);
        assert_eq!(iv.start_km, 0.0);
        assert!((iv.end_km - 50.0).abs() < 1e-4);
    }

    #[test]
    fn footprint_on_hairpin_stays_contiguous_and_excludes_far_branch() {
        let route = hairpin_route();
        let nadir_s = 100.0;
        let radius = 40.0;
        let iv = footprint_interval(&route, nadir_s, radius);
        let nadir = route.point_at(nadir_s).unwrap();

        // Dense sampling oracle: every point inside the interval is within
        // the radius; the interval is contiguous by construction.
        let mut s = iv.start_km;
        while s <= iv.end_km {
            let d = geo::great_circle_distance(route.point_at(s).unwrap(), nadir);
            assert!(d <= radius + 1e-6, "s={s} d={d}");
            s += 0.5;
        }

        // The far branch re-enters the disk (the legs are only 20 km
        // apart) yet lies outside the contiguous interval.
        let l = route.length_km();
        let mut reentrant = 0;
        let mut s = iv.end_km + 1.0;
        while s < l {
            let d = geo::great_circle_distance(route.point_at(s).unwrap(), nadir);
            if d <= radius {
                reentrant += 1;
            }
            s += 1.0;
        }
        assert!(reentrant > 0, "hairpin should re-enter the footprint disk");
    }

    #[test]
    fn plan_full_straight_route_matches_interval_cover_oracle() {
        let route = equator_route(4504.0);
        let target = CoverageMask::full(route.length_km());
        let plan = plan_cover(&route, &target, 40.0, 20.0);
        assert_eq!(plan.nodes.len(), 57); // ceil(4504 / 80)
        assert!((plan.nodes[0].nadir_s_km - 40.0).abs() < 1e-9);
    }

    #[test]
    fn plan_single_node_route() {
        let route = equator_route(80.0);
        let target = CoverageMask::full(route.length_km());
        let plan = plan_cover(&route, &target, 40.0, 20.0);
        assert_eq!(plan.nodes.len(), 1);
        assert!((plan.nodes[0].nadir_s_km - 40.0).abs() < 1e-6);
    }

    #[test]
    fn plan_empty_target_places_nothing() {
        let route = equator_route(1000.0);
        let plan = plan_cover(&route, &CoverageMask::empty(), 40.0, 20.0);
        assert!(plan.nodes.is_empty());
        assert!(verify_cover(&route, &plan, 0.1).is_clean());
    }

    #[test]
    fn random_straight_routes_match_ceil_bound() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0020);
        for _ in 0..100 {
            let length: f64 = rng.gen_range(1.0..10000.0);
            let route = equator_route(length);
            let target = CoverageMask::full(route.length_km());
            let plan = plan_cover(&route, &target, 40.0, 20.0);
            let oracle = (route.length_km() / 80.0).ceil() as usize;
            assert_eq!(
                plan.nodes.len(),
                oracle.max(1),
                "length {length}: greedy {} vs oracle {oracle}",
                plan.nodes.len()
            );
        }
    }

    #[test]
    fn gap_target_needs_no_more_nodes_than_full_cover() {
        let route = equator_route(2000.0);
        let l = route.length_km();
        let full = CoverageMask::full(l);
        let gaps = CoverageMask::from_intervals([(100.0, 400.0), (900.0, 1100.0), (1500.0, 1980.0)])
            .unwrap();
        let full_plan = plan_cover(&route, &full, 40.0, 20.0);
        let gap_plan = plan_cover(&route, &gaps, 40.0, 20.0);
        assert!(gap_plan.nodes.len() <= full_plan.nodes.len());
        assert!(verify_cover(&route, &gap_plan, 0.1).is_clean());
    }

    #[test]
    fn enlarging_target_never_decreases_count() {
        let mut rng = StdRng::seed_from_u64(0x5eed_0021);
        let route = equator_route(3000.0);
        for _ in 0..20 {
            let a1: f64 = rng.gen_range(0.0..1000.0);
            let b1: f64 = a1 + rng.gen_range(10.0..800.0);
            let small = CoverageMask::from_intervals([(a1, b1)]).unwrap();
            let b2 = b1 + rng.gen_range(10.0..1000.0);
            let big = CoverageMask::from_intervals([(a1, b2)]).unwrap();
            let n_small = plan_cover(&route, &small, 40.0, 20.0).nodes.len();
            let n_big = plan_cover(&route, &big, 40.0, 20.0).nodes.len();
            assert!(n_big >= n_small);
        }
    }

    #[test]
    fn every_node_footprint_intersects_target() {
        let route = equator_route(2000.0);
        let gaps =
            CoverageMask::from_intervals([(0.0, 10.0), (500.0, 640.0), (1200.0, 1890.0)]).unwrap();
        let plan = plan_cover(&route, &gaps, 40.0, 20.0);
        for node in &plan.nodes {
            let fp = footprint_interval(&route, node.nadir_s_km, 40.0);
            let fp_mask = CoverageMask::from_intervals([(fp.start_km, fp.end_km)]).unwrap();
            assert!(
                !fp_mask.intersect(&gaps).is_empty(),
                "useless node at {}",
                node.nadir_s_km
            );
        }
    }

    #[test]
    fn nodes_sorted_and_count_respects_lower_bound() {
        let route = equator_route(2000.0);
        let gaps = CoverageMask::from_intervals([(100.0, 900.0), (1000.0, 1800.0)]).unwrap();
        let plan = plan_cover(&route, &gaps, 40.0, 20.0);
        for pair in plan.nodes.windows(2) {
            assert!(pair[0].nadir_s_km < pair[1].nadir_s_km);
        }
        let lower = (gaps.total_length_km() / 80.0).ceil() as usize;
        assert!(plan.nodes.len() >= lower);
        assert!(
            plan.covered.intersect(&plan.target).total_length_km()
                >= plan.target.total_length_km() - 1e-6
        );
    }

    #[test]
    fn verify_detects_deleted_node() {
        let route = equator_route(800.0);
        let target = CoverageMask::full(route.length_km());
        let mut plan = plan_cover(&route, &target, 40.0, 20.0);
        assert!(verify_cover(&route, &plan, 0.1).is_clean());
        plan.nodes.remove(4);
        let report = verify_cover(&route, &plan, 0.1);
        assert!(report.violations > 0);
        let first = report.first_violation.unwrap();
        assert!(first.nearest_nadir_km > 40.0);
    }

    #[test]
    fn verify_credits_reentrant_coverage() {
        // A node on the near leg of the hairpin covers far-leg samples even
        // though the planner's contiguous interval never claimed them.
        let route = hairpin_route();
        let l = route.length_km();
        let node = HapsNode {
            id: "haps-001".into(),
            nadir: route.point_at(100.0).unwrap(),
            nadir_s_km: 100.0,
            altitude_km: 20.0,
            footprint_radius_km: 40.0,
        };
        // Far-leg arc position roughly opposite the nadir.
        let opposite = l - 100.0 - 20.0;
        let target = CoverageMask::from_intervals([(opposite - 5.0, opposite + 5.0)]).unwrap();
        let plan = DeploymentPlan {
            route_name: route.name().into(),
            radius_km: 40.0,
            altitude_km: 20.0,
            nodes: vec![node],
            covered: CoverageMask::empty(),
            target,
        };
        assert!(verify_cover(&route, &plan, 0.1).is_clean());
    }

    #[test]
    fn plan_json_roundtrip() {
        let route = equator_route(200.0);
        let target = CoverageMask::full(route.length_km());
        let plan = plan_cover(&route, &target, 40.0, 20.0);
        let json = plan_to_json(&plan, None);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("plan.json");
        fs::write(&path, &json).unwrap();
        let loaded = load_plan(&path).unwrap();
        assert_eq!(loaded.nodes.len(), plan.nodes.len());
        assert_eq!(loaded.radius_km, 40.0);
        assert_eq!(loaded.altitude_km, 20.0);
        for (a, b) in loaded.nodes.iter().zip(&plan.nodes) {
            assert_eq!(a.id, b.id);
            assert!((a.nadir_s_km - b.nadir_s_km).abs() < 1e-12);
        }
    }
}
