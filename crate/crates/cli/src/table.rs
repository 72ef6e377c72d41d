use serde_json::{json, Value};

use stacktight::generators::{family, sphere_bundle, simplex_sphere, FamilyKind};
use stacktight::homology::betti_number;
use stacktight::orientation::orientability;
use stacktight::stacked::in_walkup_k;
use stacktight::{family_size, Complex};

use crate::CliError;

struct Row {
    name: String,
    d: String,
    n: String,
    beta1: String,
    orientation: String,
    note: String,
    computed: Option<Value>,
}

/// A row whose cells come from the complex itself.
fn computed(name: String, x: &Complex, expected_beta1: u64) -> Row {
    let b1 = betti_number(x, 1);
    let orientable = orientability(x).map(|o| o.is_orientable());
    let neighborly = x.is_neighborly();
    let in_k = in_walkup_k(x).map(|v| v.verdict).unwrap_or(false);
    let agrees = b1 == expected_beta1 && neighborly && in_k && orientable.is_ok();
    Row {
        name,
        d: x.dim().to_string(),
        n: x.num_vertices().to_string(),
        beta1: b1.to_string(),
        orientation: match &orientable {
            Ok(true) => "orientable".into(),
            Ok(false) => "non-orientable".into(),
            Err(e) => format!("error: {e}"),
        },
        note: if agrees { "computed".into() } else { "MISMATCH".into() },
        computed: Some(json!({
            "beta1": b1,
            "expected_beta1": expected_beta1,
            "n": x.num_vertices(),
            "neighborly": neighborly,
            "in_walkup_k": in_k,
            "orientable": orientable.ok(),
            "agrees": agrees,
        })),
    }
}

fn external(beta1: &str, d: &str, n: &str, name: &str) -> Row {
    Row {
        name: name.into(),
        d: d.into(),
        n: n.into(),
        beta1: beta1.into(),
        orientation: "-".into(),
        note: "out of scope: external data".into(),
        computed: None,
    }
}

fn rows(max_d: usize) -> Vec<Row> {
    let mut out = Vec::new();
    for d in 3..=4 {
        out.push(computed(format!("S^{d}_{}", d + 2), &simplex_sphere(d), 0));
    }
    for d in 3..=4 {
        let x = sphere_bundle(d, 2 * d + 3, &(1..=d as u32 + 1).collect::<Vec<_>>())
            .expect("the identity bundle on 2d+3 vertices exists");
        out.push(computed(format!("X^{d}_{}(id)", 2 * d + 3), &x, 1));
    }
    out.push(external("2", ">=4", "-", "not possible"));
    out.push(external("3", "4", "15", "M^4_15"));
    out.push(external("3", "4", "15", "N^4_15"));
    out.push(external("5", "5", "21", "?"));
    out.push(external("7", "4", "20", "?"));
    out.push(external("8", "4", "21", "M^4_21"));
    out.push(external("8", "4", "21", "N^4_21"));
    out.push(external("14", "4", "26", "N^4_26"));
    for d in 3..=max_d {
        for kind in [FamilyKind::M, FamilyKind::N] {
            let f = family(kind, d).expect("d >= 3 is valid");
            let expected = (d * d + 5 * d + 6) as u64;
            out.push(computed(format!("{kind}^{d}_{}", family_size(d)), &f.manifold, expected));
        }
    }
    out
}

pub fn run(max_d: usize, as_json: bool) -> Result<u8, CliError> {
    if !(3..=6).contains(&max_d) {
        return Err(CliError::Usage("--max-d must lie in 3..=6".into()));
    }
    let rows = rows(max_d);
    let mismatch = rows.iter().any(|r| r.note == "MISMATCH");
    if as_json {
        let value: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "complex": r.name,
                    "d": r.d,
                    "n": r.n,
                    "beta1": r.beta1,
                    "orientation": r.orientation,
                    "status": r.note,
                    "checks": r.computed,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&value).expect("rows serialize"));
    } else {
        println!(
            "{:<14} {:>4} {:>4} {:>6}  {:<15} status",
            "complex", "d", "n", "beta1", "orientation"
        );
        for r in &rows {
            println!(
                "{:<14} {:>4} {:>4} {:>6}  {:<15} {}",
                r.name, r.d, r.n, r.beta1, r.orientation, r.note
            );
        }
    }
    Ok(u8::from(mismatch))
}
