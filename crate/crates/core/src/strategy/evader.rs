use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geodesic::{Field, Region};
use crate::geom::{segment_intersection, Containment, Point, Polyline, SegmentIntersection};

/// Number of step candidates the scripted policies consider.
pub const N_CAND: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvaderPolicy {
    /// Maximizes the distance to the nearest pursuer.
    Greedy,
    /// Uniform over legal steps.
    Random,
    /// Crosses a locked guarded path whenever it can, otherwise heads for one.
    AdversarialCrosser,
    /// Moves supplied from outside.
    Human,
}

impl EvaderPolicy {
    pub const SCRIPTED: [EvaderPolicy; 3] = [
        EvaderPolicy::Greedy,
        EvaderPolicy::Random,
        EvaderPolicy::AdversarialCrosser,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvaderPolicy::Greedy => "greedy",
            EvaderPolicy::Random => "random",
            EvaderPolicy::AdversarialCrosser => "adversarial-crosser",
            EvaderPolicy::Human => "human",
        }
    }
}

impl std::fmt::Display for EvaderPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EvaderPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(EvaderPolicy::Greedy),
            "random" => Ok(EvaderPolicy::Random),
            "adversarial-crosser" | "crosser" => Ok(EvaderPolicy::AdversarialCrosser),
            "human" => Ok(EvaderPolicy::Human),
            other => Err(format!(
                "unknown policy `{other}` (greedy, random, adversarial-crosser, human)"
            )),
        }
    }
}

/// What the evader sees when choosing a step.
pub struct EvaderView<'a> {
    pub domain: &'a Region,
    /// Current territory; greedy steps stay inside it.
    pub territory: Option<&'a Region>,
    /// Distance fields from each pursuer in the free space.
    pub pursuer_fields: &'a [Field],
    pub locked_walls: &'a [Polyline],
}

/// The current position followed by `N_CAND` points of a disk grid of unit radius.
pub fn candidate_steps(e: Point) -> Vec<Point> {
    let mut out = Vec::with_capacity(N_CAND + 1);
    out.push(e);
    let rings = [1.0, 0.75, 0.5, 0.25];
    let per = N_CAND / rings.len();
    for (k, r) in rings.iter().enumerate() {
        for j in 0..per {
            let a = std::f64::consts::TAU * (j as f64 + 0.5 * (k % 2) as f64) / per as f64;
            out.push(e + Point::new(a.cos(), a.sin()) * *r);
        }
    }
    out
}

fn clearance(view: &EvaderView<'_>, q: Point) -> f64 {
    let a = view.domain.anchor(q);
    view.pursuer_fields
        .iter()
        .map(|f| view.domain.field_distance(f, &a))
        .fold(f64::INFINITY, f64::min)
}

fn crosses(walls: &[Polyline], a: Point, b: Point, tol: f64) -> bool {
    walls.iter().any(|w| {
        w.segments().any(|(p, q)| {
            !matches!(
                segment_intersection(a, b, p, q, tol),
                SegmentIntersection::None
            )
        })
    })
}

fn legal_steps(view: &EvaderView<'_>, e: Point, stay_inside: bool) -> Vec<Point> {
    let ea = view.domain.anchor(e);
    let inside = stay_inside
        && view
            .territory
            .is_some_and(|t| t.contains(e) != Containment::Outside);
    let ta = view.territory.filter(|_| inside).map(|t| (t, t.anchor(e)));
    candidate_steps(e)
        .into_iter()
        .filter(|&q| view.domain.visible(&ea, &view.domain.anchor(q)))
        .filter(|&q| ta.as_ref().is_none_or(|(t, a)| t.visible(a, &t.anchor(q))))
        .collect()
}

fn best_by_clearance(view: &EvaderView<'_>, cands: &[Point]) -> Option<Point> {
    let mut best: Option<(f64, Point)> = None;
    for &q in cands {
        let c = clearance(view, q);
        if best.is_none_or(|(b, _)| c > b) {
            best = Some((c, q));
        }
    }
    best.map(|(_, q)| q)
}

/// One evader step. `Human` stays put; its moves come from outside.
pub fn evader_step(
    policy: EvaderPolicy,
    view: &EvaderView<'_>,
    e: Point,
    rng: &mut impl Rng,
) -> Point {
    match policy {
        EvaderPolicy::Human => e,
        EvaderPolicy::Greedy => {
            let mut cands = legal_steps(view, e, true);
            if cands.is_empty() {
                cands = legal_steps(view, e, false);
            }
            best_by_clearance(view, &cands).unwrap_or(e)
        }
        EvaderPolicy::Random => {
            let cands = legal_steps(view, e, false);
            if cands.is_empty() {
                e
            } else {
                cands[rng.gen_range(0..cands.len())]
            }
        }
        EvaderPolicy::AdversarialCrosser => {
            let cands = legal_steps(view, e, false);
            if view.locked_walls.is_empty() {
                return best_by_clearance(view, &legal_steps(view, e, true)).unwrap_or(e);
            }
            let tol = view.domain.tol();
            let crossing: Vec<Point> = cands
                .iter()
                .copied()
                .filter(|&q| q != e && crosses(view.locked_walls, e, q, tol))
                .collect();
            if !crossing.is_empty() {
                return best_by_clearance(view, &crossing).unwrap_or(e);
            }
            // Head for the nearest point of any locked wall.
            let target = view
                .locked_walls
                .iter()
                .map(|w| {
                    let (s, d) = w.locate(e);
                    (d, w.point_at_clamped(s))
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .map(|(_, p)| p)
                .unwrap();
            let tf = view.domain.field(&view.domain.anchor(target));
            let mut best: Option<(f64, Point)> = None;
            for &q in &cands {
                let d = view.domain.field_distance(&tf, &view.domain.anchor(q));
                if best.is_none_or(|(b, _)| d < b) {
                    best = Some((d, q));
                }
            }
            best.map_or(e, |(_, q)| q)
        }
    }
}

/// Initial evader position: the best of `N_CAND` uniform free-space samples
/// (the first sample for the random policy).
pub fn place_evader(
    policy: EvaderPolicy,
    domain: &Region,
    pursuer_fields: &[Field],
    rng: &mut impl Rng,
) -> Point {
    let outer = &domain.outer_loop().points;
    let (mut lo, mut hi) = (outer[0], outer[0]);
    for p in outer {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let mut samples = Vec::new();
    let mut tries = 0;
    while samples.len() < N_CAND && tries < 100 * N_CAND {
        tries += 1;
        let q = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if domain.contains(q) == Containment::Inside {
            samples.push(q);
        }
    }
    if samples.is_empty() {
        return outer[0];
    }
    if policy == EvaderPolicy::Random {
        return samples[0];
    }
    let view = EvaderView {
        domain,
        territory: None,
        pursuer_fields,
        locked_walls: &[],
    };
    best_by_clearance(&view, &samples).unwrap_or(samples[0])
}
