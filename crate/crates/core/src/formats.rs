//! File formats: PTS/1 point sets (text) and the JSON documents CPLX/1,
//! SCX/1, LEDGER/1 and PARASITES/1. POLY/1, RGN/1 and GRP/1 live next to
//! their types.
//!
//! Every JSON document carries a `schema_version` string. Readers reject a
//! missing or different version as a parse error.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::complex::{FaceId, PolyhedralComplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::polyhedra::rational::format_rational;
use crate::polyhedra::{parse_rat, parse_usize, tokens, Lines, RationalPolyhedron};
use crate::projective::{BlowUpLedger, BlowUpStage, ParasiticRecord};
use crate::voronoi::SiteSet;

pub const COMPLEX_SCHEMA: &str = "CPLX/1";
pub const SIMPLICIAL_SCHEMA: &str = "SCX/1";
pub const LEDGER_SCHEMA: &str = "LEDGER/1";
pub const RECORDS_SCHEMA: &str = "PARASITES/1";

/// PTS/1: `N k`, then `k` lines of `N` rationals.
pub fn write_points(y: &SiteSet) -> String {
    let mut out = format!("{} {}\n", y.ambient_dim(), y.len());
    for p in y.sites() {
        out.push_str(&p.iter().map(format_rational).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    out
}

pub fn read_points(text: &str) -> Result<SiteSet> {
    let mut lines = Lines::new(text);
    let (ln, header) = lines.expect("PTS/1 header `N k`")?;
    let toks = tokens(header);
    if toks.len() != 2 {
        return Err(Error::parse(ln, 1, "PTS/1 header must be `N k`"));
    }
    let n = parse_usize(ln, toks[0])?;
    let k = parse_usize(ln, toks[1])?;
    let mut sites = Vec::with_capacity(k);
    for _ in 0..k {
        let (ln, line) = lines.expect("a point line")?;
        let toks = tokens(line);
        if toks.len() != n {
            let col = toks.get(n).or(toks.last()).map_or(1, |t| t.0);
            return Err(Error::parse(ln, col, format!("expected {n} coordinates, found {}", toks.len())));
        }
        sites.push(toks.into_iter().map(|t| parse_rat(ln, t)).collect::<Result<Vec<_>>>()?);
    }
    if let Some((ln, _)) = lines.next_content() {
        return Err(Error::parse(ln, 1, "trailing content after PTS/1 points"));
    }
    SiteSet::new(n, sites)
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    schema_version: String,
    ambient_dim: usize,
    faces: Vec<FaceEntry>,
    morphisms: Vec<MorphismEntry>,
}

#[derive(Serialize, Deserialize)]
struct FaceEntry {
    id: FaceId,
    poly: RationalPolyhedron,
}

#[derive(Serialize, Deserialize)]
struct MorphismEntry {
    src: FaceId,
    dst: FaceId,
}

pub fn write_complex(c: &PolyhedralComplex) -> String {
    let doc = ComplexDoc {
        schema_version: COMPLEX_SCHEMA.into(),
        ambient_dim: c.ambient_dim(),
        faces: c
            .faces()
            .iter()
            .map(|(&id, f)| FaceEntry {
                id,
                poly: f.poly.clone(),
            })
            .collect(),
        morphisms: c.morphisms().iter().map(|&(src, dst)| MorphismEntry { src, dst }).collect(),
    };
    to_json(&doc)
}

pub fn read_complex(text: &str) -> Result<PolyhedralComplex> {
    let doc: ComplexDoc = from_json(text)?;
    check_schema(&doc.schema_version, COMPLEX_SCHEMA)?;
    PolyhedralComplex::from_parts(
        doc.ambient_dim,
        doc.faces.into_iter().map(|f| (f.id, f.poly)),
        doc.morphisms.into_iter().map(|m| (m.src, m.dst)),
    )
}

#[derive(Serialize, Deserialize)]
struct SimplicialDoc {
    schema_version: String,
    vertex_count: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    maximal_simplices: Vec<Vec<usize>>,
}

pub fn write_simplicial(k: &SimplicialComplex) -> String {
    let doc = SimplicialDoc {
        schema_version: SIMPLICIAL_SCHEMA.into(),
        vertex_count: k.vertex_count(),
        labels: Some(k.labels().to_vec()),
        maximal_simplices: k.maximal_simplices(),
    };
    to_json(&doc)
}

/// Labels are optional on input and default to vertex indices.
pub fn read_simplicial(text: &str) -> Result<SimplicialComplex> {
    let doc: SimplicialDoc = from_json(text)?;
    check_schema(&doc.schema_version, SIMPLICIAL_SCHEMA)?;
    let k = SimplicialComplex::new(doc.vertex_count, &doc.maximal_simplices)?;
    match doc.labels {
        Some(labels) => k.with_labels(labels),
        None => Ok(k),
    }
}

#[derive(Serialize, Deserialize)]
struct LedgerDoc {
    schema_version: String,
    ambient_dim: usize,
    stages: Vec<BlowUpStage>,
    equivariance_checks: usize,
}

pub fn write_ledger(ledger: &BlowUpLedger) -> String {
    let doc = LedgerDoc {
        schema_version: LEDGER_SCHEMA.into(),
        ambient_dim: ledger.ambient_dim,
        stages: ledger.stages.clone(),
        equivariance_checks: ledger.equivariance_checks,
    };
    to_json(&doc)
}

pub fn read_ledger(text: &str) -> Result<BlowUpLedger> {
    let doc: LedgerDoc = from_json(text)?;
    check_schema(&doc.schema_version, LEDGER_SCHEMA)?;
    Ok(BlowUpLedger {
        ambient_dim: doc.ambient_dim,
        stages: doc.stages,
        equivariance_checks: doc.equivariance_checks,
    })
}

#[derive(Serialize, Deserialize)]
struct RecordsDoc {
    schema_version: String,
    ambient_dim: usize,
    records: Vec<ParasiticRecord>,
}

/// PARASITES/1: parasitic or saturated records of a complex in Q^N.
pub fn write_records(ambient_dim: usize, records: &[ParasiticRecord]) -> String {
    let doc = RecordsDoc {
        schema_version: RECORDS_SCHEMA.into(),
        ambient_dim,
        records: records.to_vec(),
    };
    to_json(&doc)
}

pub fn read_records(text: &str) -> Result<(usize, Vec<ParasiticRecord>)> {
    let doc: RecordsDoc = from_json(text)?;
    check_schema(&doc.schema_version, RECORDS_SCHEMA)?;
    if let Some(r) = doc.records.iter().find(|r| r.subspace.ambient_dim() != doc.ambient_dim) {
        return Err(Error::DimensionMismatch {
            expected: doc.ambient_dim,
            found: r.subspace.ambient_dim(),
        });
    }
    Ok((doc.ambient_dim, doc.records))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory serialization");
    s.push('\n');
    s
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))
}

fn check_schema(found: &str, expected: &str) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::parse(1, 1, format!("schema_version {found:?}, expected {expected:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::rational::{int, rat};
    use crate::projective::{blowup_plan, parasitic_intersections, saturate, span_assignment};
    use crate::voronoi::voronoi_complex;

    #[test]
    fn points_round_trip_and_errors() {
        let y = SiteSet::new(2, vec![vec![int(0), rat(1, 2)], vec![int(-3), int(7)]]).unwrap();
        let text = write_points(&y);
        assert_eq!(text, "2 2\n0 1/2\n-3 7\n");
        assert_eq!(read_points(&text).unwrap(), y);
        assert_eq!(
            read_points("# pts\n2 1\n1 x\n"),
            Err(Error::parse(3, 3, "expected a rational, found \"x\""))
        );
        assert!(matches!(read_points("1 2\n0\n1 2\n"), Err(Error::Parse { line: 3, column: 3, .. })));
        assert!(matches!(read_points("1 1\n0\n5\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn complex_round_trip() {
        let y = SiteSet::new(1, vec![vec![int(0)], vec![int(1)]]).unwrap();
        let v = voronoi_complex(&y).unwrap();
        let text = write_complex(&v.complex);
        assert!(text.contains("\"schema_version\": \"CPLX/1\""));
        assert_eq!(read_complex(&text).unwrap(), v.complex);
    }

    #[test]
    fn simplicial_round_trip_and_default_labels() {
        let k = SimplicialComplex::simplex_boundary(2).with_labels(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        assert_eq!(read_simplicial(&write_simplicial(&k)).unwrap(), k);
        let bare = read_simplicial(r#"{"schema_version":"SCX/1","vertex_count":2,"maximal_simplices":[[0,1]]}"#).unwrap();
        assert_eq!(bare, SimplicialComplex::full_simplex(1));
    }

    #[test]
    fn ledger_round_trip() {
        let square = RationalPolyhedron::closed_box(&[int(0), int(0)], &[int(1), int(1)]).unwrap();
        let c = PolyhedralComplex::from_subdivision(&[square]).unwrap();
        let a = span_assignment(&c).unwrap();
        let s = saturate(&c, &a, &parasitic_intersections(&c, &a));
        let ledger = blowup_plan(&c, &a, &s).unwrap();
        assert_eq!(read_ledger(&write_ledger(&ledger)).unwrap(), ledger);
        assert_eq!(read_records(&write_records(2, &s)).unwrap(), (2, s));
    }

    #[test]
    fn schema_and_syntax_errors() {
        let wrong = r#"{"schema_version":"SCX/2","vertex_count":1,"maximal_simplices":[]}"#;
        assert!(matches!(read_simplicial(wrong), Err(Error::Parse { .. })));
        let broken = "{\n  \"schema_version\": \"CPLX/1\",\n  oops\n}";
        assert!(matches!(read_complex(broken), Err(Error::Parse { line: 3, .. })));
    }
}
