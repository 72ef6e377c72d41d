use std::time::Instant;

use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::json;

use stacktight::certificate::capped_list;
use stacktight::complex::binomial;
use stacktight::homology::{betti_checked, tightness_spotcheck, DEFAULT_BINOMIAL_CAP};
use stacktight::orientation::orientability_check;
use stacktight::stacked::{class_check, in_walkup_k, in_walkup_kbar, tight_neighborly, tightness_report};
use stacktight::symmetry::{automorphism_group, cyclic_link_order, equal_up_to_dihedral, verify_cyclic_action};
use stacktight::{Certificate, Check, Complex, Error, Vertex, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckName {
    Neighborly,
    ClassK,
    ClassKbar,
    Betti,
    TightNeighborly,
    #[value(alias = "tight")]
    Tightness,
    Orientability,
    CyclicAction,
    AutomorphismGroup,
    LinkOrder,
    Spotcheck,
}

impl CheckName {
    fn label(self) -> &'static str {
        match self {
            CheckName::Neighborly => "neighborly",
            CheckName::ClassK => "class-k",
            CheckName::ClassKbar => "class-kbar",
            CheckName::Betti => "betti",
            CheckName::TightNeighborly => "tight-neighborly",
            CheckName::Tightness => "tightness",
            CheckName::Orientability => "orientability",
            CheckName::CyclicAction => "cyclic-action",
            CheckName::AutomorphismGroup => "automorphism-group",
            CheckName::LinkOrder => "link-order",
            CheckName::Spotcheck => "tightness-spotcheck",
        }
    }
}

pub struct Pipeline {
    pub n_cyclic: Option<usize>,
    pub vertex: Option<Vertex>,
    pub expect_link: Option<Vec<Vertex>>,
    pub samples: usize,
    pub seed: u64,
    pub timings: bool,
}

impl Pipeline {
    /// Resolves `--all` and `--check` into a duplicate-free, ordered list.
    ///
    /// `--all` picks the class matching the boundary, and skips checks whose
    /// inputs were not supplied or that have no meaning in low dimension.
    pub fn select(&self, x: &Complex, all: bool, explicit: &[CheckName]) -> Result<Vec<CheckName>, String> {
        let mut names: Vec<CheckName> = explicit.to_vec();
        if all {
            names.push(CheckName::Neighborly);
            names.push(if x.is_closed() { CheckName::ClassK } else { CheckName::ClassKbar });
            names.push(CheckName::Betti);
            if x.dim() >= 3 && x.is_closed() {
                names.push(CheckName::TightNeighborly);
            }
            if x.is_closed() {
                names.push(CheckName::Tightness);
            }
            names.push(CheckName::Orientability);
            if self.n_cyclic.is_some() {
                names.push(CheckName::CyclicAction);
            }
            names.push(CheckName::AutomorphismGroup);
            if self.vertex.is_some() {
                names.push(CheckName::LinkOrder);
            }
        }
        if names.is_empty() {
            return Err("nothing to check: pass --all or --check NAME".into());
        }
        names.sort();
        names.dedup();
        if names.contains(&CheckName::CyclicAction) && self.n_cyclic.is_none() {
            return Err("cyclic-action needs --n-cyclic".into());
        }
        if names.contains(&CheckName::LinkOrder) && self.vertex.is_none() {
            return Err("link-order needs --vertex".into());
        }
        if self.expect_link.is_some() && !names.contains(&CheckName::LinkOrder) {
            return Err("--expect-link only applies to link-order".into());
        }
        Ok(names)
    }

    pub fn run(&self, x: &Complex, subject: String, names: &[CheckName], jobs: usize) -> Result<Certificate, String> {
        let timed = |&name: &CheckName| {
            let start = Instant::now();
            let mut checks = self.check(x, name);
            if self.timings {
                let ms = start.elapsed().as_millis() as u64;
                for c in &mut checks {
                    c.duration_ms = Some(ms);
                }
            }
            checks
        };
        let results: Vec<Vec<Check>> = if jobs == 1 {
            names.iter().map(timed).collect()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| e.to_string())?
                .install(|| names.par_iter().map(timed).collect())
        };

        let mut cert = Certificate::new(subject)
            .with_param("d", x.dim())
            .with_param("n", x.num_vertices())
            .with_param("f_vector", &x.f_vector().counts)
            .with_param("checks", names.iter().map(|n| n.label()).collect::<Vec<_>>());
        if let Some(n) = self.n_cyclic {
            cert.set_param("n_cyclic", n);
        }
        if let Some(v) = self.vertex {
            cert.set_param("vertex", v);
        }
        if names.contains(&CheckName::Spotcheck) {
            cert.set_param("samples", self.samples);
            cert.set_param("seed", self.seed);
        }
        for c in results.into_iter().flatten() {
            cert.push(c);
        }
        Ok(cert)
    }

    fn check(&self, x: &Complex, name: CheckName) -> Vec<Check> {
        let label = name.label();
        let error = |verdict: Verdict, e: Error| Check::new(label, verdict, json!({"error": e.to_string()}));
        let one = match name {
            CheckName::Neighborly => {
                let f0 = x.num_vertices() as u64;
                let f1 = x.f_vector().get(1);
                let vs = x.vertices();
                let missing: Vec<[Vertex; 2]> = vs
                    .iter()
                    .flat_map(|&a| {
                        let nb = x.neighbours(a);
                        vs.iter().filter(move |&&b| b > a && !nb.contains(&b)).map(move |&b| [a, b])
                    })
                    .collect();
                Check::new(
                    label,
                    Verdict::from_bool(missing.is_empty()),
                    json!({"f0": f0, "f1": f1, "complete_graph_edges": binomial(f0, 2), "missing_edges": capped_list(&missing)}),
                )
            }
            CheckName::ClassK | CheckName::ClassKbar => {
                let v = if name == CheckName::ClassK { in_walkup_k(x) } else { in_walkup_kbar(x) };
                match v {
                    Ok(v) => class_check(label, &v),
                    Err(e) => error(Verdict::Fail, e),
                }
            }
            CheckName::Betti => match betti_checked(x, DEFAULT_BINOMIAL_CAP) {
                Ok(b) => Check::new(label, Verdict::Pass, json!({"betti": b.as_slice(), "euler": b.euler()})),
                Err(e) => error(Verdict::Inconclusive, e),
            },
            CheckName::TightNeighborly => match tight_neighborly(x) {
                Ok(r) => Check::new(
                    label,
                    Verdict::from_bool(r.equality),
                    serde_json::to_value(&r).unwrap_or_default(),
                ),
                Err(e) => error(Verdict::Inconclusive, e),
            },
            CheckName::Tightness => tightness_report(x).to_check(),
            CheckName::Orientability => orientability_check(x),
            CheckName::CyclicAction => {
                let n = self.n_cyclic.expect("checked in select");
                match verify_cyclic_action(x, n) {
                    Ok(ok) => Check::new(label, Verdict::from_bool(ok), json!({"n": n, "action": "i -> i+1 mod n"})),
                    Err(e) => error(Verdict::Fail, e),
                }
            }
            CheckName::AutomorphismGroup => match automorphism_group(x) {
                Ok(g) => Check::new(
                    label,
                    Verdict::Pass,
                    json!({
                        "order": g.order,
                        "generators": capped_list(&g.generators.iter().map(|p| &p.images).collect::<Vec<_>>()),
                        "base": g.base,
                        "orbit_sizes": g.orbit_sizes,
                    }),
                ),
                Err(e @ (Error::ConeNotSupported | Error::GroupOrderOverflow(_))) => error(Verdict::Inconclusive, e),
                Err(e) => error(Verdict::Fail, e),
            },
            CheckName::LinkOrder => {
                let v = self.vertex.expect("checked in select");
                match cyclic_link_order(x, v) {
                    Ok(cycle) => {
                        let matches = self.expect_link.as_ref().map(|e| equal_up_to_dihedral(&cycle, e));
                        Check::new(
                            label,
                            Verdict::from_bool(matches.unwrap_or(true)),
                            json!({"vertex": v, "cycle": cycle, "matches_expected": matches}),
                        )
                    }
                    Err(e) => error(Verdict::Fail, e),
                }
            }
            CheckName::Spotcheck => match tightness_spotcheck(x, self.samples, self.seed) {
                Ok(c) => return c.checks,
                Err(e) => error(Verdict::Inconclusive, e),
            },
        };
        vec![one]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pipeline() -> Pipeline {
        Pipeline {
            n_cyclic: None,
            vertex: None,
            expect_link: None,
            samples: 10,
            seed: 0,
            timings: false,
        }
    }

    fn tetrahedron() -> Complex {
        Complex::from_facets([[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
    }

    #[test]
    fn all_on_a_closed_surface() {
        let names = pipeline().select(&tetrahedron(), true, &[]).unwrap();
        assert!(names.contains(&CheckName::ClassK));
        assert!(!names.contains(&CheckName::ClassKbar));
        assert!(!names.contains(&CheckName::TightNeighborly));
        assert!(!names.contains(&CheckName::CyclicAction));
    }

    #[test]
    fn all_on_a_ball_uses_the_bounded_class() {
        let ball = Complex::from_facets([[0, 1, 2], [1, 2, 3]]).unwrap();
        let names = pipeline().select(&ball, true, &[]).unwrap();
        assert!(names.contains(&CheckName::ClassKbar));
        assert!(!names.contains(&CheckName::Tightness));
    }

    #[test]
    fn duplicates_collapse() {
        let names = pipeline()
            .select(&tetrahedron(), false, &[CheckName::Betti, CheckName::Betti, CheckName::Neighborly])
            .unwrap();
        assert_eq!(names, vec![CheckName::Neighborly, CheckName::Betti]);
    }

    #[test]
    fn spotcheck_contributes_its_own_check() {
        let p = pipeline();
        let cert = p.run(&tetrahedron(), "t".into(), &[CheckName::Spotcheck], 1).unwrap();
        assert_eq!(cert.checks.len(), 1);
        assert_eq!(cert.checks[0].name, "tightness-spotcheck");
    }
}
