//! Plain-text facet lists: one facet per line as whitespace-separated labels,
//! `#` starts a comment, blank lines are ignored.

use std::fmt::Write as _;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::face::{Face, Vertex};

pub fn parse_facet_list(text: &str) -> Result<Complex> {
    let mut facets = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let labels = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Vertex>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("`{tok}` is not a non-negative integer label"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        facets.push(Face::new(labels));
    }
    if facets.is_empty() {
        return Err(Error::EmptyComplex);
    }
    Complex::from_facets(facets)
}

/// Writes facets in lexicographic order, optionally preceded by `#` comment lines.
pub fn write_facet_list(complex: &Complex, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        let _ = writeln!(out, "# {h}");
    }
    for f in complex.facets() {
        let line: Vec<String> = f.vertices().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let text = "# tetrahedron boundary\n0 1 2\n\n0 1 3  # trailing\n0 2 3\n1 2 3\n";
        let x = parse_facet_list(text).unwrap();
        assert_eq!(x.num_facets(), 4);
        assert_eq!(x.f_vector().counts, vec![4, 6, 4]);
    }

    #[test]
    fn reports_line_number() {
        let err = parse_facet_list("0 1 2\n1 x 3\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                message: "`x` is not a non-negative integer label".into()
            }
        );
        assert!(matches!(
            parse_facet_list("0 1\n-3 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn empty_input_is_error() {
        assert_eq!(parse_facet_list("# nothing\n\n"), Err(Error::EmptyComplex));
    }

    #[test]
    fn write_then_parse_is_identity() {
        let x = Complex::from_facets([[3, 1, 2], [2, 3, 4]]).unwrap();
        let text = write_facet_list(&x, &["two triangles".into()]);
        assert!(text.starts_with("# two triangles\n1 2 3\n"));
        assert_eq!(parse_facet_list(&text).unwrap(), x);
    }
}
