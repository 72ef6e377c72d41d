//! For even d, the explicit signed facets of the three pieces glue to a
//! coherent orientation of the boundary of M(d).

use std::collections::BTreeMap;

use stacktight::complex::Complex;
use stacktight::face::{Face, Vertex};
use stacktight::generators::family_m;
use stacktight::orientation::OrientationAssignment;

/// Position past the end, so nothing is omitted.
const NONE: usize = usize::MAX;

/// An oriented simplex as (vertex set, sign relative to sorted order).
type Signed = (Face, i8);

fn signed(sign: i8, seq: &[Vertex]) -> Signed {
    let mut inversions = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            assert_ne!(seq[i], seq[j], "repeated vertex in {seq:?}");
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    let parity = if inversions % 2 == 0 { 1 } else { -1 };
    (Face::new(seq.iter().copied()), sign * parity)
}

struct Pieces {
    n: usize,
    d: usize,
}

impl Pieces {
    fn a(&self, j: i64) -> Vertex {
        j.rem_euclid(self.n as i64) as Vertex
    }

    fn omit(seq: &[Vertex], l: usize) -> Vec<Vertex> {
        seq.iter().enumerate().filter(|(p, _)| *p != l).map(|(_, &v)| v).collect()
    }

    /// `(-1)^l <a_{i-d-1}, ..., a_i>` with position `l` removed.
    fn sigma(&self, i: i64, l: usize) -> Signed {
        let d = self.d as i64;
        let seq: Vec<Vertex> = (i - d - 1..=i).map(|j| self.a(j)).collect();
        signed(if l.is_multiple_of(2) { 1 } else { -1 }, &Self::omit(&seq, l))
    }

    /// `(-1)^(l+1) <a_{i+(d+2)}, ..., a_{i+(d+1)(d+3)-1}, a_i>` with position `l` removed.
    fn mu(&self, i: i64, l: usize) -> Signed {
        let d = self.d as i64;
        let mut seq: Vec<Vertex> = (1..=d + 1).map(|j| self.a(i + j * (d + 3) - 1)).collect();
        seq.push(self.a(i));
        signed(if l.is_multiple_of(2) { -1 } else { 1 }, &Self::omit(&seq, l))
    }

    fn b_sequence(&self, k: i64, i: i64) -> Vec<Vertex> {
        let d = self.d as i64;
        let mut seq: Vec<Vertex> = (i - 2 - d + k..=i - 2).map(|j| self.a(j)).collect();
        seq.push(self.a(i));
        seq.extend((1..=k).map(|j| self.a(i + j * (d + 3) - 1)));
        seq
    }

    /// `(-1)^l <b_{k,i,1}, ..., b_{k,i,d+2}>` with position `l` removed.
    fn alpha(&self, k: i64, i: i64, l: usize) -> Signed {
        signed(if l.is_multiple_of(2) { 1 } else { -1 }, &Self::omit(&self.b_sequence(k, i), l))
    }

    /// Boundary facets of the ball spanned by `solids`, signed by `rule`.
    fn signed_boundary(
        &self,
        solids: Vec<Face>,
        rule: impl Fn(usize, usize) -> Signed,
        count: usize,
    ) -> BTreeMap<Face, i8> {
        let boundary = Complex::from_facets(solids).unwrap().boundary().unwrap();
        let mut out = BTreeMap::new();
        for which in 0..count {
            for l in 0..=self.d + 1 {
                let (f, s) = rule(which, l);
                if boundary.is_facet(&f) {
                    out.insert(f, s);
                }
            }
        }
        assert_eq!(out.len(), boundary.num_facets());
        out
    }
}

fn check(d: usize) {
    let n = d * d + 5 * d + 5;
    let p = Pieces { n, d };
    let ni = n as i64;
    let di = d as i64;
    let target = family_m(d).unwrap().manifold;

    let e1 = p.signed_boundary(
        (0..ni).map(|i| p.sigma(i, NONE).0).collect(),
        |i, l| p.sigma(i as i64, l),
        n,
    );
    let e2 = p.signed_boundary(
        (0..ni).map(|i| p.mu(i, NONE).0).collect(),
        |i, l| p.mu(i as i64, l),
        n,
    );

    let mut oriented: BTreeMap<Face, i8> = BTreeMap::new();
    let mut removed = Vec::new();
    for i in 0..ni {
        let a_i = p.sigma(i, d);
        let b_i = p.mu(i, d);
        let a_f = p.alpha(1, i, d + 1);
        let b_f = p.alpha(di, i, 0);
        assert_eq!(a_i.0, a_f.0);
        assert_eq!(a_i.1, -a_f.1, "+sigma_(i,d) = -alpha_(1,i,d+1) fails at i = {i}");
        assert_eq!(b_i.0, b_f.0);
        assert_eq!(b_i.1, -b_f.1, "+mu_(i,d) = -alpha_(d,i,0) fails at i = {i}");
        removed.push(a_i.0);
        removed.push(b_i.0);

        let solids: Vec<Face> = (1..=di)
            .map(|k| Face::new(p.b_sequence(k, i)))
            .collect();
        let fi = p.signed_boundary(solids, |k, l| p.alpha(k as i64 + 1, i, l), d);
        let fi_complex = Complex::from_facets(fi.keys().cloned()).unwrap();
        let signs: Vec<i8> = fi_complex.facets().iter().map(|f| fi[f]).collect();
        assert!(OrientationAssignment { basepoint: 0, signs }.is_coherent(&fi_complex));
        for (f, s) in fi {
            oriented.insert(f, s);
        }
    }
    for piece in [&e1, &e2] {
        let x = Complex::from_facets(piece.keys().cloned()).unwrap();
        let signs: Vec<i8> = x.facets().iter().map(|f| piece[f]).collect();
        assert!(OrientationAssignment { basepoint: 0, signs }.is_coherent(&x));
        oriented.extend(piece.iter().map(|(f, s)| (f.clone(), *s)));
    }
    for f in &removed {
        oriented.remove(f);
    }

    let glued = Complex::from_facets(oriented.keys().cloned()).unwrap();
    assert_eq!(glued, target, "pieces do not reassemble the boundary at d = {d}");
    let signs: Vec<i8> = glued.facets().iter().map(|f| oriented[f]).collect();
    assert!(
        OrientationAssignment { basepoint: 0, signs }.is_coherent(&glued),
        "signed facets are not coherent at d = {d}"
    );
}

#[test]
fn explicit_orientation_d2() {
    check(2);
}

#[test]
fn explicit_orientation_d4() {
    check(4);
}

#[test]
fn explicit_orientation_d6() {
    check(6);
}
