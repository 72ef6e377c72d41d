use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stacktight::face::{Face, Vertex};
use stacktight::generators::{
    family, handle_addition, sphere_bundle, FamilyKind, GluingMap,
};
use stacktight::homology::betti;
use stacktight::orientation::{orientability, orientability_with, Options, Orientability};
use stacktight::stacked::{in_walkup_k, in_walkup_kbar};
use stacktight::symmetry::{automorphism_group, dual_action_is_injective, DEFAULT_ORDER_CAP};
use stacktight::tree::{closed_form_hat, complex_from_family, graph_g, hat_distance, tree_family, Variant};

const KINDS: [FamilyKind; 2] = [FamilyKind::M, FamilyKind::N];

fn permutations(k: u32) -> Vec<Vec<Vertex>> {
    fn go(p: &mut Vec<Vertex>, i: usize, out: &mut Vec<Vec<Vertex>>) {
        if i == p.len() {
            out.push(p.clone());
        }
        for j in i..p.len() {
            p.swap(i, j);
            go(p, i + 1, out);
            p.swap(i, j);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..=k).collect(), 0, &mut out);
    out
}

#[test]
fn fillings_have_distinct_facets_up_to_d6() {
    for d in 2..=6 {
        let n = d * d + 5 * d + 5;
        for kind in KINDS {
            let f = family(kind, d).unwrap();
            assert_eq!(f.filling.num_facets(), (d + 2) * n);
            assert!(f.filling.facets().iter().all(|s| s.len() == d + 2));
            assert_eq!(f.labeled.len(), (d + 2) * n);
        }
    }
}

#[test]
fn fillings_and_boundaries_are_neighborly() {
    for d in 2..=5 {
        for kind in KINDS {
            let f = family(kind, d).unwrap();
            assert!(f.filling.is_neighborly());
            assert!(f.manifold.is_neighborly());
            assert!(f.manifold.is_closed());
            assert!(f.manifold.boundary().unwrap().is_empty());
            assert!(in_walkup_kbar(&f.filling).unwrap().verdict);
        }
    }
}

#[test]
fn top_betti_of_closed_manifolds() {
    for d in 2..=4 {
        for kind in KINDS {
            let b = betti(&family(kind, d).unwrap().manifold);
            assert_eq!(b.get(d), 1, "{kind}({d})");
        }
    }
    for (d, m, sigma) in [(2, 7, vec![1, 2, 3]), (2, 9, vec![2, 1, 3]), (3, 10, vec![2, 1, 3, 4])] {
        assert_eq!(betti(&sphere_bundle(d, m, &sigma).unwrap()).get(d), 1);
    }
}

#[test]
fn boundary_skeleton_matches_filling_from_d4() {
    for d in 4..=5 {
        for kind in KINDS {
            let f = family(kind, d).unwrap();
            assert!(in_walkup_k(&f.manifold).unwrap().verdict);
            for k in 0..d {
                assert_eq!(f.manifold.faces(k), f.filling.faces(k), "{kind}({d}) k = {k}");
            }
        }
    }
}

#[test]
fn large_m_bundles_accept_every_permutation() {
    for d in 2..=3usize {
        for m in [3 * d + 3, 3 * d + 4] {
            for sigma in permutations(d as u32 + 1) {
                let x = sphere_bundle(d, m, &sigma).unwrap();
                assert!(x.is_closed(), "d={d} m={m} sigma={sigma:?}");
            }
        }
    }
}

#[test]
fn handle_addition_is_label_stable() {
    let x = family(FamilyKind::M, 2).unwrap().manifold;
    let f = x.facets()[0].clone();
    let g = x
        .facets()
        .iter()
        .find(|g| g.is_disjoint(&f))
        .unwrap()
        .clone();
    let pairs: Vec<(Vertex, Vertex)> = f.vertices().iter().copied().zip(g.vertices().iter().copied()).collect();
    let gl = GluingMap::new(pairs).unwrap();
    let (a, b) = match (handle_addition(&x, &gl), handle_addition(&x, &gl)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(a), Err(b)) => {
            assert_eq!(a, b);
            return;
        }
        other => panic!("{other:?}"),
    };
    assert_eq!(a.complex.facets(), b.complex.facets());
    assert_eq!(a.witness, b.witness);
}

#[test]
fn orientability_by_parity_of_d() {
    for d in 2..=5 {
        for kind in KINDS {
            let o = orientability(&family(kind, d).unwrap().manifold).unwrap();
            assert_eq!(o.is_orientable(), d % 2 == 0, "{kind}({d})");
        }
    }
}

#[test]
fn surfaces_have_even_euler_characteristic_when_orientable() {
    for kind in KINDS {
        let x = family(kind, 2).unwrap().manifold;
        let f = x.f_vector().counts;
        let chi = f[0] as i64 - f[1] as i64 + f[2] as i64;
        let b = betti(&x);
        assert_eq!(b.get(1) as i64, 2 - chi);
        assert!(orientability(&x).unwrap().is_orientable());
        assert_eq!(chi.rem_euclid(2), 0);
    }
}

#[test]
fn non_orientable_verdict_ignores_traversal() {
    let x = family(FamilyKind::N, 3).unwrap().manifold;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let opts = Options {
            basepoint: rng.random_range(0..x.num_facets()),
            shuffle_seed: Some(rng.random()),
        };
        match orientability_with(&x, opts).unwrap() {
            Orientability::NonOrientable { witness } => {
                assert_eq!(witness.first(), Some(&x.facets()[opts.basepoint]));
                assert_eq!(witness.first(), witness.last());
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn automorphisms_act_faithfully() {
    for (kind, d) in [(FamilyKind::M, 2), (FamilyKind::N, 2), (FamilyKind::M, 3), (FamilyKind::N, 3)] {
        let f = family(kind, d).unwrap();
        let g = automorphism_group(&f.manifold).unwrap();
        for p in g.elements(f.manifold.vertices(), DEFAULT_ORDER_CAP).unwrap() {
            assert!(p.is_automorphism(&f.manifold));
        }
        assert!(dual_action_is_injective(&f.manifold, &g, DEFAULT_ORDER_CAP).unwrap());
        let h = automorphism_group(&f.filling).unwrap();
        for p in &h.generators {
            assert!(p.is_automorphism(&f.manifold), "{kind}({d})");
        }
        assert!(h.order <= g.order);
    }
}

#[test]
fn t1_hats_follow_closed_form() {
    for d in 2..=5 {
        let t = tree_family(d, Variant::T1).unwrap();
        for &node in &t.host.nodes {
            assert_eq!(t.hat(node).unwrap(), closed_form_hat(d, node), "d = {d}, {node}");
        }
    }
}

#[test]
fn every_t1_member_meets_the_first() {
    for d in 2..=5 {
        let t = tree_family(d, Variant::T1).unwrap();
        let first: BTreeSet<usize> = t.members[0].iter().copied().collect();
        for (i, m) in t.members.iter().enumerate() {
            assert!(m.iter().any(|u| first.contains(u)), "d = {d}, member {i}");
        }
    }
}

#[test]
fn hat_distance_is_a_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in 2..=4 {
        for variant in [Variant::T1, Variant::T2] {
            let t = tree_family(d, variant).unwrap();
            let hats: Vec<Face> = t.hats();
            for _ in 0..2000 {
                let [a, b, c] = [0; 3].map(|_| &hats[rng.random_range(0..hats.len())]);
                assert!(hat_distance(a, c) <= hat_distance(a, b) + hat_distance(b, c));
                assert_eq!(hat_distance(a, b), hat_distance(b, a));
                assert_eq!(hat_distance(a, b) == 0, a == b);
            }
        }
    }
}

#[test]
fn dual_graph_recovers_host() {
    for d in 2..=4 {
        for variant in [Variant::T1, Variant::T2] {
            let t = tree_family(d, variant).unwrap();
            let x = complex_from_family(&t.host, &t).unwrap();
            let dual = x.dual_graph().unwrap();
            let host = graph_g(d).unwrap();
            let to_facet: Vec<usize> = host
                .nodes
                .iter()
                .map(|&u| x.facet_index(&t.hat(u).unwrap()).unwrap())
                .collect();
            assert_eq!(dual.edge_count(), host.edge_count());
            for a in 0..host.node_count() {
                for &b in host.neighbours(a) {
                    assert!(dual.has_edge(to_facet[a], to_facet[b]));
                }
            }
        }
    }
}
