//! Stacked balls and spheres, Walkup's classes, and the combinatorial
//! tightness criteria built on them.
//!
//! Stacked balls are recognised by the dual-graph criterion: a pure
//! `d`-complex is a stacked ball iff its dual graph is a tree and
//! `f_0 = f_d + d`. Stacked spheres are recognised by reverse 0-moves: a
//! vertex of degree `d + 1` whose link is the boundary of a `d`-simplex is
//! removed and its star replaced by that simplex, until only the boundary of
//! a `(d+1)`-simplex remains.
//!
//! The reduction scans vertices in ascending label order and takes the first
//! removable one. In a stacked `d`-sphere with `d >= 2` and more than `d + 2`
//! vertices every such vertex is removable and its removal leaves a stacked
//! sphere, so the greedy order never rejects a genuine stacked sphere. If the
//! simplex that would replace a star is already a facet, the input cannot be
//! a stacked sphere above the minimal size and the reduction stops with a
//! negative answer.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{Certificate, Check, Verdict};
use crate::complex::{binomial, Complex};
use crate::error::{Error, Result};
use crate::face::{Face, Vertex};
use crate::homology::betti_number;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallCounts {
    pub dim: isize,
    pub f0: usize,
    pub fd: usize,
    pub dual_tree: bool,
}

impl BallCounts {
    pub fn is_stacked_ball(&self) -> bool {
        self.dual_tree && self.f0 == self.fd + self.dim as usize
    }
}

pub fn ball_counts(x: &Complex) -> Result<BallCounts> {
    let g = x.dual_graph()?;
    Ok(BallCounts {
        dim: x.dim(),
        f0: x.num_vertices(),
        fd: x.num_facets(),
        dual_tree: g.is_tree(),
    })
}

/// Dual graph is a tree and `f_0 = f_d + d`.
pub fn is_stacked_ball(x: &Complex) -> Result<bool> {
    if x.is_empty() {
        return Ok(false);
    }
    Ok(ball_counts(x)?.is_stacked_ball())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereReduction {
    pub stacked: bool,
    /// Vertices in the order they were removed.
    pub trace: Vec<Vertex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl SphereReduction {
    fn accept(trace: Vec<Vertex>) -> Self {
        SphereReduction {
            stacked: true,
            trace,
            reason: None,
        }
    }

    fn reject(trace: Vec<Vertex>, reason: impl Into<String>) -> Self {
        SphereReduction {
            stacked: false,
            trace,
            reason: Some(reason.into()),
        }
    }
}

pub fn is_stacked_sphere(x: &Complex) -> Result<SphereReduction> {
    if !x.is_pure() {
        return Err(Error::NotPure);
    }
    if x.dim() < 1 {
        return Err(Error::DimOutOfRange {
            got: x.dim() as i64,
            expected: "d >= 1",
        });
    }
    if !x.boundary()?.is_empty() {
        return Err(Error::NotClosed);
    }
    let d = x.dim() as usize;
    if d == 1 {
        return Ok(if x.is_connected() {
            SphereReduction::accept(Vec::new())
        } else {
            SphereReduction::reject(Vec::new(), "1-dimensional and disconnected")
        });
    }

    let mut facets: BTreeSet<Face> = x.facets().iter().cloned().collect();
    let mut star: BTreeMap<Vertex, BTreeSet<Face>> = BTreeMap::new();
    for f in &facets {
        for &v in f.vertices() {
            star.entry(v).or_default().insert(f.clone());
        }
    }
    let mut trace = Vec::new();
    loop {
        let nv = star.len();
        if nv == d + 2 {
            return Ok(if facets.len() == d + 2 {
                SphereReduction::accept(trace)
            } else {
                SphereReduction::reject(trace, "minimal vertex count but not a simplex boundary")
            });
        }
        if nv < d + 2 {
            return Ok(SphereReduction::reject(trace, "fewer than d + 2 vertices"));
        }
        let candidate = star.iter().find_map(|(&v, through)| {
            if through.len() != d + 1 {
                return None;
            }
            let nbrs: BTreeSet<Vertex> = through
                .iter()
                .flat_map(|f| f.vertices().iter().copied())
                .filter(|&w| w != v)
                .collect();
            (nbrs.len() == d + 1).then(|| (v, Face::new(nbrs)))
        });
        let Some((v, replacement)) = candidate else {
            return Ok(SphereReduction::reject(
                trace,
                "no vertex admits a reverse 0-move",
            ));
        };
        if facets.contains(&replacement) {
            return Ok(SphereReduction::reject(
                trace,
                format!("replacement facet {replacement} already present"),
            ));
        }
        let removed = star.remove(&v).expect("candidate has a star");
        for f in &removed {
            facets.remove(f);
            for &w in f.vertices() {
                if w != v {
                    star.get_mut(&w).expect("neighbour star").remove(f);
                }
            }
        }
        for &w in replacement.vertices() {
            star.get_mut(&w).expect("neighbour star").insert(replacement.clone());
        }
        facets.insert(replacement);
        trace.push(v);
    }
}

/// Per-vertex evidence for class membership.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinkEvidence {
    Sphere {
        stacked: bool,
        moves: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        reason: Option<String>,
    },
    Ball {
        stacked: bool,
        counts: BallCounts,
    },
    Error {
        message: String,
    },
}

impl LinkEvidence {
    pub fn holds(&self) -> bool {
        match self {
            LinkEvidence::Sphere { stacked, .. } | LinkEvidence::Ball { stacked, .. } => *stacked,
            LinkEvidence::Error { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub verdict: bool,
    pub per_vertex: BTreeMap<Vertex, LinkEvidence>,
}

impl ClassVerdict {
    fn from_evidence(per_vertex: BTreeMap<Vertex, LinkEvidence>) -> Self {
        ClassVerdict {
            verdict: per_vertex.values().all(LinkEvidence::holds),
            per_vertex,
        }
    }

    pub fn failing_vertices(&self) -> Vec<Vertex> {
        self.per_vertex
            .iter()
            .filter(|(_, e)| !e.holds())
            .map(|(&v, _)| v)
            .collect()
    }
}

fn class_preconditions(x: &Complex) -> Result<()> {
    if !x.is_pure() {
        return Err(Error::NotPure);
    }
    if x.dim() < 2 {
        return Err(Error::DimOutOfRange {
            got: x.dim() as i64,
            expected: "d >= 2",
        });
    }
    Ok(())
}

/// Membership in K(d): every vertex link is a stacked (d-1)-sphere.
///
/// A link that violates the sphere preconditions (for instance one with
/// boundary) is recorded as a failing vertex rather than aborting the scan.
pub fn in_walkup_k(x: &Complex) -> Result<ClassVerdict> {
    class_preconditions(x)?;
    let mut per_vertex = BTreeMap::new();
    for &v in x.vertices() {
        let link = x.vertex_link(v)?;
        let ev = match is_stacked_sphere(&link) {
            Ok(r) => LinkEvidence::Sphere {
                stacked: r.stacked,
                moves: r.trace.len(),
                reason: r.reason,
            },
            Err(e) => LinkEvidence::Error {
                message: e.to_string(),
            },
        };
        per_vertex.insert(v, ev);
    }
    Ok(ClassVerdict::from_evidence(per_vertex))
}

/// Membership in the bounded class: every vertex link is a stacked (d-1)-ball.
pub fn in_walkup_kbar(x: &Complex) -> Result<ClassVerdict> {
    class_preconditions(x)?;
    let mut per_vertex = BTreeMap::new();
    for &v in x.vertices() {
        let link = x.vertex_link(v)?;
        let ev = match ball_counts(&link) {
            Ok(counts) => LinkEvidence::Ball {
                stacked: counts.is_stacked_ball(),
                counts,
            },
            Err(e) => LinkEvidence::Error {
                message: e.to_string(),
            },
        };
        per_vertex.insert(v, ev);
    }
    Ok(ClassVerdict::from_evidence(per_vertex))
}

/// Both sides of `C(d+2,2) * b1 <= C(f0-d-1, 2)`, plus the lower-bound
/// inequality `C(d+2,2) * b1 <= f1 - (d+1) f0 + C(d+2,2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightNeighborlyReport {
    pub d: usize,
    pub f0: u64,
    pub f1: u64,
    pub beta1: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub equality: bool,
    pub lower_bound_rhs: i64,
    pub lower_bound_holds: bool,
}

/// Manifoldness of `x` is a caller-asserted precondition.
pub fn tight_neighborly(x: &Complex) -> Result<TightNeighborlyReport> {
    if x.dim() < 3 {
        return Err(Error::DimOutOfRange {
            got: x.dim() as i64,
            expected: "d >= 3",
        });
    }
    let d = x.dim() as u64;
    let f0 = x.num_vertices() as u64;
    let f1 = x.faces(1).len() as u64;
    let beta1 = betti_number(x, 1);
    let c = binomial(d + 2, 2);
    let lhs = c * beta1;
    let rhs = binomial(f0.saturating_sub(d + 1), 2);
    let lower_bound_rhs = f1 as i64 - ((d + 1) * f0) as i64 + c as i64;
    Ok(TightNeighborlyReport {
        d: d as usize,
        f0,
        f1,
        beta1,
        lhs,
        rhs,
        equality: lhs == rhs,
        lower_bound_rhs,
        lower_bound_holds: lhs as i64 <= lower_bound_rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Tightness {
    Tight,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub verdict: Tightness,
    /// Which sufficient condition was applied.
    pub route: String,
    pub neighborly: bool,
    pub in_walkup_k: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta1: Option<u64>,
    pub reasons: Vec<String>,
}

impl TightnessReport {
    pub fn to_check(&self) -> Check {
        let verdict = match self.verdict {
            Tightness::Tight => Verdict::Pass,
            Tightness::Inconclusive => Verdict::Inconclusive,
        };
        Check::new(
            "tightness",
            verdict,
            serde_json::to_value(self).unwrap_or_default(),
        )
    }
}

/// Applies the sufficient tightness criteria. Never reports "not tight".
///
/// * `d != 3`: neighborly members of K(d) are tight.
/// * `d == 3`: a neighborly member of K(3) is tight when
///   `20 * b1 = (f0 - 4)(f0 - 5)`.
pub fn tightness_report(x: &Complex) -> TightnessReport {
    let mut reasons = Vec::new();
    let d = x.dim();
    let route = if d == 3 {
        "neighborly K(3) with b1 = (f0-4)(f0-5)/20"
    } else {
        "neighborly member of K(d), d != 3"
    }
    .to_owned();
    let inconclusive = |route: String, reasons: Vec<String>| TightnessReport {
        verdict: Tightness::Inconclusive,
        route,
        neighborly: false,
        in_walkup_k: false,
        beta1: None,
        reasons,
    };
    if !x.is_connected() || x.is_empty() {
        return inconclusive(route, vec!["complex is not connected".into()]);
    }
    if d < 2 {
        return inconclusive(route, vec!["no criterion below dimension 2".into()]);
    }
    let neighborly = x.is_neighborly();
    if !neighborly {
        reasons.push("not neighborly".into());
    }
    let in_k = match in_walkup_k(x) {
        Ok(v) => {
            if !v.verdict {
                reasons.push(format!(
                    "vertex links not stacked spheres at {:?}",
                    &v.failing_vertices()[..v.failing_vertices().len().min(8)]
                ));
            }
            v.verdict
        }
        Err(e) => {
            reasons.push(format!("class check failed: {e}"));
            false
        }
    };
    let mut beta1 = None;
    let mut ok = neighborly && in_k;
    if d == 3 {
        let b1 = betti_number(x, 1);
        let f0 = x.num_vertices() as u64;
        beta1 = Some(b1);
        let matches = f0 >= 5 && 20 * b1 == (f0 - 4) * (f0 - 5);
        if !matches {
            reasons.push(format!("b1 = {b1} differs from (f0-4)(f0-5)/20"));
        }
        ok &= matches;
    }
    TightnessReport {
        verdict: if ok {
            Tightness::Tight
        } else {
            Tightness::Inconclusive
        },
        route,
        neighborly,
        in_walkup_k: in_k,
        beta1,
        reasons,
    }
}

pub fn tightness_certificate(x: &Complex) -> Certificate {
    let mut cert = Certificate::new("tightness criterion")
        .with_param("d", x.dim())
        .with_param("n", x.num_vertices());
    cert.push(tightness_report(x).to_check());
    cert
}

/// Summary check used by certificates.
pub fn class_check(name: &str, v: &ClassVerdict) -> Check {
    Check::new(
        name,
        Verdict::from_bool(v.verdict),
        json!({
            "vertices": v.per_vertex.len(),
            "failing": crate::certificate::capped_list(&v.failing_vertices()),
        }),
    )
}
