//! Rebuilds the 29-vertex 3-manifolds from a stacked 3-sphere by thirty
//! combinatorial handle additions, checking every intermediate claim.
//!
//! Vertex names are packed into disjoint integer ranges:
//!
//! | name | label |
//! |------|-------|
//! | `a_j`, `j >= 0` | `j` |
//! | `a_j`, `-4 <= j < 0` | `33 + j` |
//! | `b_m`, `m <= 28` | `100 + m` |
//! | `b_34, b_40, b_46, b_52` | `140..=143` |
//! | `u_j` | `200 + j + 4` |
//! | `v_j` | `300 + j + 3` |
//! | `w_j` | `400 + j + 2` |
//!
//! Any other `b_m` with `m >= 29` is `b_{m-29}`.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{Certificate, Check, Verdict};
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::face::{Face, Vertex};
use crate::generators::{family, handle_addition_tracked, AdmissibilityWitness, FamilyKind, GluingMap};
use crate::stacked::{in_walkup_k, is_stacked_ball, is_stacked_sphere};
use crate::symmetry::isomorphic;
use crate::union_find::LabelUnion;

pub const STEPS: usize = 30;

fn a(j: i64) -> Vertex {
    if j >= 0 {
        j as Vertex
    } else {
        (33 + j) as Vertex
    }
}

fn b(m: i64) -> Vertex {
    match m {
        0..=28 => 100 + m as Vertex,
        34 | 40 | 46 | 52 => 140 + ((m - 34) / 6) as Vertex,
        _ => b(m - 29),
    }
}

fn u(j: i64) -> Vertex {
    (200 + j + 4) as Vertex
}

fn v(j: i64) -> Vertex {
    (300 + j + 3) as Vertex
}

fn w(j: i64) -> Vertex {
    (400 + j + 2) as Vertex
}

/// The path ball on `a_{-4}, ..., a_28`.
pub fn ball_one() -> Complex {
    Complex::from_maximal((0..29).map(|i| Face::new((0..=4).map(|j| a(i - j)))).collect())
}

/// The comb-shaped ball on the `b`, `u`, `v`, `w` vertices.
pub fn ball_two(kind: FamilyKind) -> Complex {
    let mut facets = Vec::new();
    for i in 0..29i64 {
        facets.push(Face::new((0..=4).map(|j| b(i + 5 + 6 * j))));
        // The tooth at i hangs off the i-th spine facet, so its copy of
        // b_i is the one that facet uses: b_{i+29}.
        let bi = b(i + 29);
        facets.push(Face::new([w(i - 2), bi, b(i + 5), b(i + 11), b(i + 17)]));
        match kind {
            FamilyKind::M => {
                facets.push(Face::new([v(i - 3), w(i - 2), bi, b(i + 5), b(i + 11)]));
                facets.push(Face::new([u(i - 4), v(i - 3), w(i - 2), bi, b(i + 5)]));
            }
            FamilyKind::N => {
                facets.push(Face::new([v(i - 3), w(i - 2), bi, b(i + 11), b(i + 17)]));
                facets.push(Face::new([u(i - 4), v(i - 3), w(i - 2), bi, b(i + 17)]));
            }
        }
    }
    facets.sort();
    facets.dedup();
    Complex::from_maximal(facets)
}

fn gluing(step: usize) -> Vec<(Vertex, Vertex)> {
    let i = step as i64;
    match step {
        1..=28 => vec![
            (u(i - 4), a(i - 4)),
            (v(i - 3), a(i - 3)),
            (w(i - 2), a(i - 2)),
            (b(i + 29), a(i)),
        ],
        29 => (-4..=-1).map(|j| (a(j), a(j + 29))).collect(),
        30 => [34, 40, 46, 52].iter().map(|&m| (b(m), b(m - 29))).collect(),
        _ => unreachable!("steps run from 1 to 30"),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplayStep {
    pub step: usize,
    pub vertices_after: usize,
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AdmissibilityWitness>,
}

#[derive(Debug, Clone)]
pub struct Replay {
    pub kind: FamilyKind,
    pub ball_one: Complex,
    pub ball_two: Complex,
    pub ball: Complex,
    pub sphere: Complex,
    pub steps: Vec<ReplayStep>,
    /// Error that stopped the sequence early, with its step.
    pub failure: Option<(usize, Error)>,
    pub result: Complex,
}

/// Runs the construction, stopping after `stop_after` handle additions.
pub fn replay(kind: FamilyKind, stop_after: Option<usize>) -> Result<Replay> {
    let b1 = ball_one();
    let b2 = ball_two(kind);
    let mut uf = LabelUnion::new();
    for (s, t) in [(u(-4), a(-4)), (v(-3), a(-3)), (w(-2), a(-2)), (b(0), a(0))] {
        uf.union(s, t);
    }
    let ball = Complex::from_facets(
        b1.facets()
            .iter()
            .chain(b2.facets())
            .map(|f| Face::new(f.vertices().iter().map(|&x| uf.find(x))))
            .collect::<Vec<_>>(),
    )?;
    let sphere = ball.boundary()?;
    let last = stop_after.unwrap_or(STEPS).min(STEPS);
    let mut current = sphere.clone();
    let mut steps = Vec::new();
    let mut failure = None;
    for step in 1..=last {
        let pairs: Vec<_> = gluing(step)
            .into_iter()
            .map(|(s, t)| (uf.find(s), uf.find(t)))
            .collect();
        let outcome = GluingMap::new(pairs).and_then(|g| handle_addition_tracked(&current, &g, &mut uf));
        match outcome {
            Ok(h) => {
                steps.push(ReplayStep {
                    step,
                    vertices_after: h.complex.num_vertices(),
                    admissible: h.admissible(),
                    witness: h.witness,
                });
                current = h.complex;
            }
            Err(e) => {
                failure = Some((step, e));
                break;
            }
        }
    }
    Ok(Replay {
        kind,
        ball_one: b1,
        ball_two: b2,
        ball,
        sphere,
        steps,
        failure,
        result: current,
    })
}

impl Replay {
    pub fn completed(&self) -> bool {
        self.failure.is_none() && self.steps.len() == STEPS
    }

    pub fn all_admissible(&self) -> bool {
        self.steps.iter().all(|s| s.admissible)
    }

    pub fn certificate(&self) -> Certificate {
        let mut cert = Certificate::new(format!("handle-addition replay of {}(3)", self.kind))
            .with_param("family", self.kind.to_string())
            .with_param("steps_requested", self.steps.len() + usize::from(self.failure.is_some()));
        if self.kind == FamilyKind::N {
            cert.set_param("experimental", true);
        }
        for (name, x) in [("ball-one", &self.ball_one), ("ball-two", &self.ball_two), ("glued-ball", &self.ball)] {
            let ok = is_stacked_ball(x).unwrap_or(false);
            cert.push(Check::new(
                format!("{name}-stacked"),
                Verdict::from_bool(ok),
                json!({"vertices": x.num_vertices(), "facets": x.num_facets()}),
            ));
        }
        let red = is_stacked_sphere(&self.sphere);
        cert.push(Check::new(
            "sphere-stacked",
            Verdict::from_bool(
                self.sphere.num_vertices() == 149 && red.as_ref().is_ok_and(|r| r.stacked),
            ),
            json!({
                "vertices": self.sphere.num_vertices(),
                "facets": self.sphere.num_facets(),
                "moves": red.as_ref().map(|r| r.trace.len()).ok(),
            }),
        ));
        for s in &self.steps {
            cert.push(Check::new(
                format!("step-{:02}", s.step),
                Verdict::from_bool(s.admissible),
                serde_json::to_value(s).unwrap_or_default(),
            ));
        }
        if let Some((step, e)) = &self.failure {
            cert.push(Check::new(
                format!("step-{step:02}"),
                Verdict::Fail,
                json!({"step": step, "error": e.to_string()}),
            ));
            return cert;
        }
        let class = in_walkup_k(&self.result).map(|v| v.verdict).unwrap_or(false);
        cert.push(Check::new(
            "result-in-walkup-k",
            Verdict::from_bool(class),
            json!({"vertices": self.result.num_vertices(), "facets": self.result.num_facets()}),
        ));
        if self.completed() {
            let target = family(self.kind, 3).expect("d = 3 is valid").manifold;
            let identical = target == self.result;
            let iso = identical || isomorphic(&self.result, &target).is_some();
            cert.push(Check::new(
                "final-isomorphism",
                Verdict::from_bool(iso),
                json!({"identical_labels": identical, "isomorphic": iso}),
            ));
        }
        cert
    }
}

/// Full replay for `M(3)` as a certificate.
pub fn replay_certificate(kind: FamilyKind, stop_after: Option<usize>) -> Certificate {
    match replay(kind, stop_after) {
        Ok(r) => r.certificate(),
        Err(e) => {
            let mut cert = Certificate::new(format!("handle-addition replay of {kind}(3)"));
            cert.push(Check::new("construction", Verdict::Fail, json!({"error": e.to_string()})));
            cert
        }
    }
}
