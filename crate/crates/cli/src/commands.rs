use std::fmt;
use std::fs;
use std::path::Path;

use polycomplex::complex::{PolyhedralComplex, SimplicialComplex};
use polycomplex::formats::{
    read_complex, read_points, read_records, read_simplicial, to_json, write_complex, write_ledger, write_points,
    write_records, write_simplicial,
};
use polycomplex::projective::{
    blowup_plan, no_limit_control, no_limit_witness, parasitic_intersections, saturate, span_assignment,
    verify_proper, ParasiticRecord, SpanAssignment,
};
use polycomplex::topology::{
    dual_complex, dual_move, fundamental_group, homology, q_superperfect_certificate, DualComplexMove,
    GroupPresentation, Ring,
};
use polycomplex::voronoi::{
    clipped_complex, delaunay, is_simple_configuration, perturb_to_simple, voronoi_complex, PolyhedralRegion,
    DEFAULT_RETRY_CAP,
};
use polycomplex::Error;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::{Cli, Command, Global};

pub enum Verdict {
    Passed,
    Failed,
}

impl From<bool> for Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Passed
        } else {
            Verdict::Failed
        }
    }
}

/// A command that could not produce its answer.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Verification(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonSimpleConfiguration { .. }
            | Error::NonSimpleComplex(_)
            | Error::NonSimpleFace(_)
            | Error::RetryCapExceeded { .. }
            | Error::OverlapNotFace { .. }
            | Error::Inconsistent(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<Verdict, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

/// Parses a file, prefixing errors with its path.
fn load<T>(path: &Path, parse: impl FnOnce(&str) -> polycomplex::Result<T>) -> Result<T, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|e| match Failure::from(e) {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn emit(g: &Global, text: &str) -> Result<(), Failure> {
    if let Some(path) = &g.out {
        fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

/// JSON report: the serialized value as an object with `schema_version`.
fn report(schema: &str, value: impl serde::Serialize) -> String {
    let mut v = serde_json::to_value(value).expect("in-memory serialization");
    match &mut v {
        Value::Object(map) => {
            map.insert("schema_version".into(), Value::String(schema.into()));
        }
        other => {
            v = json!({ "schema_version": schema, "value": other.take() });
        }
    }
    to_json(&v)
}

pub fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Voronoi { points } => {
            let y = load(points, read_points)?;
            let v = voronoi_complex(&y)?;
            println!(
                "voronoi: {} sites in Q^{}, {} faces, {} facets",
                y.len(),
                y.ambient_dim(),
                v.complex.len(),
                v.complex.facets().len()
            );
            emit(g, &write_complex(&v.complex))?;
            Ok(Verdict::Passed)
        }
        Command::CheckSimple { points, complex } => {
            let (kind, simple, witness) = match (points, complex) {
                (Some(p), _) => {
                    let r = is_simple_configuration(&load(p, read_points)?);
                    ("configuration", r.simple, r.witness.map(|w| json!(w)))
                }
                (None, Some(c)) => {
                    let r = load(c, read_complex)?.is_simple();
                    ("complex", r.simple, r.witness.map(|w| json!(w)))
                }
                (None, None) => return Err(Failure::Input("one of --points or --complex is required".into())),
            };
            println!("simple: {simple}");
            if let Some(w) = &witness {
                println!("witness: {w}");
            }
            emit(g, &report("SIMPLE/1", json!({ "kind": kind, "simple": simple, "witness": witness })))?;
            Ok(simple.into())
        }
        Command::Perturb { points } => {
            let bound = g.bound.as_ref().ok_or_else(|| Failure::Input("perturb needs --bound p/q".into()))?;
            let y = load(points, read_points)?;
            let moved = perturb_to_simple(&y, bound, g.seed, DEFAULT_RETRY_CAP)?;
            println!("perturb: {} sites, seed {}, simple: true", moved.len(), g.seed);
            emit(g, &write_points(&moved))?;
            Ok(Verdict::Passed)
        }
        Command::Delaunay { points } => {
            let d = delaunay(&load(points, read_points)?)?;
            let cert = &d.certificate;
            println!(
                "delaunay: {} simplices, dimension {}, certified: {}",
                d.complex.maximal_simplices().len(),
                d.complex.dimension(),
                cert.passed()
            );
            println!("certificate: {}", serde_json::to_string(cert).expect("serializable"));
            emit(g, &write_simplicial(&d.complex))?;
            Ok(cert.passed().into())
        }
        Command::Clip { points, region } => {
            let y = load(points, read_points)?;
            let s = load(region, PolyhedralRegion::from_text)?;
            let c = clipped_complex(&y, &s)?;
            let nerve = homology(&c.nerve()?, Ring::Q);
            println!(
                "clip: {} faces, {} facets, nerve betti {:?}",
                c.len(),
                c.facets().len(),
                nerve.trimmed_betti()
            );
            emit(g, &write_complex(&c))?;
            Ok(Verdict::Passed)
        }
        Command::Nerve { complex } => {
            let n = load(complex, read_complex)?.nerve()?;
            println!("nerve: {} vertices, f-vector {:?}", n.vertex_count(), n.f_vector());
            emit(g, &write_simplicial(&n))?;
            Ok(Verdict::Passed)
        }
        Command::Parasites { complex } => {
            let c = load(complex, read_complex)?;
            let a = span_assignment(&c)?;
            let p = parasitic_intersections(&c, &a);
            println!("parasites: {} records", p.len());
            emit(g, &write_records(c.ambient_dim(), &p))?;
            Ok(Verdict::Passed)
        }
        Command::Saturate { complex, parasites } => {
            let c = load(complex, read_complex)?;
            let a = span_assignment(&c)?;
            let p = match parasites {
                Some(path) => records_for(&c, path)?,
                None => parasitic_intersections(&c, &a),
            };
            let s = saturate(&c, &a, &p);
            println!("saturate: {} records from {}", s.len(), p.len());
            emit(g, &write_records(c.ambient_dim(), &s))?;
            Ok(Verdict::Passed)
        }
        Command::VerifyProper { complex, records } => {
            let c = load(complex, read_complex)?;
            let (a, s) = saturated(&c, records.as_deref())?;
            let r = verify_proper(&c, &a, &s)?;
            println!(
                "verify-proper: {} records, bound {}, passed: {}",
                r.records_checked, r.dimension_bound, r.passed
            );
            for v in &r.violations {
                println!("violation: check {} record {}: {}", v.check, v.record, v.detail);
            }
            emit(g, &report("PROPER/1", &r))?;
            Ok(r.passed.into())
        }
        Command::BlowupPlan { complex, records } => {
            let c = load(complex, read_complex)?;
            let (a, s) = saturated(&c, records.as_deref())?;
            let ledger = blowup_plan(&c, &a, &s)?;
            let dims: Vec<String> = ledger
                .stages
                .iter()
                .map(|st| format!("{}:{}", st.dimension, st.centers.values().map(Vec::len).sum::<usize>()))
                .collect();
            println!("blowup-plan: {} centers, stages [{}]", ledger.center_count(), dims.join(" "));
            emit(g, &write_ledger(&ledger))?;
            Ok(Verdict::Passed)
        }
        Command::Homology { complex } => {
            let h = homology(&load(complex, read_simplicial)?, g.ring.into());
            println!("betti: {:?}", h.betti);
            let torsion: Vec<String> = h
                .torsion
                .iter()
                .enumerate()
                .filter(|(_, t)| !t.is_empty())
                .map(|(d, t)| format!("H{d}: {}", t.iter().map(|x| format!("Z/{x}")).collect::<Vec<_>>().join(" + ")))
                .collect();
            if !torsion.is_empty() {
                println!("torsion: {}", torsion.join(", "));
            }
            emit(g, &report("HOMOLOGY/1", &h))?;
            Ok(Verdict::Passed)
        }
        Command::Pi1 { complex } => {
            let p = fundamental_group(&load(complex, read_simplicial)?)?;
            println!(
                "pi1: {} generators, {} relators, abelianization {}",
                p.generators(),
                p.relators().len(),
                p.abelianization()
            );
            emit(g, &p.to_text())?;
            Ok(Verdict::Passed)
        }
        Command::Superperfect { complex, presentation } => superperfect(g, complex.as_deref(), presentation.as_deref()),
        Command::DualMove { complex, kind, target } => {
            let k = load(complex, read_simplicial)?;
            let mv = DualComplexMove {
                kind: (*kind).into(),
                target: target.clone(),
            };
            let moved = dual_move(&k, &mv)?;
            let before = homology(&k, Ring::Q).trimmed_betti();
            let after = homology(&moved, Ring::Q).trimmed_betti();
            println!("dual-move: {} -> {} vertices, betti {before:?} -> {after:?}", k.vertex_count(), moved.vertex_count());
            emit(g, &write_simplicial(&moved))?;
            Ok((before == after).into())
        }
        Command::DualComplex { strata } => {
            let doc: StrataDoc = load(strata, parse_strata)?;
            let pairs: Vec<(Vec<String>, usize)> = doc.strata.into_iter().map(|s| (s.components, s.count)).collect();
            let k = dual_complex(&doc.components, &pairs)?;
            println!(
                "dual-complex: {} vertices, f-vector {:?}, betti {:?}",
                k.vertex_count(),
                k.f_vector(),
                homology(&k, Ring::Q).trimmed_betti()
            );
            emit(g, &write_simplicial(&k))?;
            Ok(Verdict::Passed)
        }
        Command::NoLimitCheck { control } => {
            let r = if *control {
                no_limit_control(g.degree)?
            } else {
                no_limit_witness(g.degree)?
            };
            println!("restriction_image_dim: {}", r.restriction_image_dim);
            println!("solution_dim: {} ({} unknowns, {} equations)", r.solution_dim, r.unknowns, r.equations);
            for f in &r.identities {
                println!("identity [{}] {}: {}", f.source, f.identity, if f.holds { "holds" } else { "fails" });
            }
            emit(g, &report("NOLIMIT/1", &r))?;
            Ok((r.collapses_line() != *control).into())
        }
    }
}

fn records_for(c: &PolyhedralComplex, path: &Path) -> Result<Vec<ParasiticRecord>, Failure> {
    let (n, records) = load(path, read_records)?;
    if n != c.ambient_dim() {
        return Err(Failure::Input(format!(
            "{}: records live in P^{n}, complex in Q^{}",
            path.display(),
            c.ambient_dim()
        )));
    }
    if let Some(r) = records.iter().find(|r| c.face(r.ambient_face).is_err()) {
        return Err(Failure::Input(format!("{}: unknown face {}", path.display(), r.ambient_face)));
    }
    Ok(records)
}

fn saturated(c: &PolyhedralComplex, records: Option<&Path>) -> Result<(SpanAssignment, Vec<ParasiticRecord>), Failure> {
    let a = span_assignment(c)?;
    let s = match records {
        Some(path) => records_for(c, path)?,
        None => saturate(c, &a, &parasitic_intersections(c, &a)),
    };
    Ok((a, s))
}

fn euler_characteristic(k: &SimplicialComplex) -> i64 {
    k.f_vector().iter().enumerate().map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
}

fn superperfect(g: &Global, complex: Option<&Path>, presentation: Option<&Path>) -> Outcome {
    let doc = match (complex, presentation) {
        (_, Some(path)) => {
            let p = load(path, GroupPresentation::from_text)?;
            let stats = p.stats();
            let h1 = p.abelianization();
            let cert = q_superperfect_certificate(&p.to_complex());
            println!("certified: {}", cert.certified);
            println!("chi: {}", stats.euler_characteristic);
            println!("balanced: {}", stats.balanced);
            println!("h1: {h1}");
            json!({
                "source": "presentation",
                "certified": cert.certified,
                "chi": stats.euler_characteristic,
                "balanced": stats.balanced,
                "h1": h1.to_string(),
                "abelianization": h1,
                "complex": cert,
            })
        }
        (Some(path), None) => {
            let k = load(path, read_simplicial)?;
            let cert = q_superperfect_certificate(&k);
            let h1 = fundamental_group(&k).ok().map(|p| p.abelianization());
            let h1_text = h1.as_ref().map_or("undefined".to_string(), |a| a.to_string());
            println!("certified: {}", cert.certified);
            println!("chi: {}", euler_characteristic(&k));
            println!("h1: {h1_text}");
            if !cert.obstructions.is_empty() {
                println!("obstructions: reduced H_i(Q) != 0 for i in {:?}", cert.obstructions);
            }
            json!({
                "source": "complex",
                "certified": cert.certified,
                "chi": euler_characteristic(&k),
                "h1": h1_text,
                "abelianization": h1,
                "complex": cert,
            })
        }
        (None, None) => return Err(Failure::Input("one of --complex or --presentation is required".into())),
    };
    let certified = doc["certified"].as_bool().unwrap_or(false);
    emit(g, &report("SUPERPERFECT/1", doc))?;
    Ok(certified.into())
}

#[derive(Deserialize)]
struct StrataDoc {
    schema_version: String,
    components: Vec<String>,
    #[serde(default)]
    strata: Vec<StratumEntry>,
}

#[derive(Deserialize)]
struct StratumEntry {
    components: Vec<String>,
    count: usize,
}

/// STRATA/1: component labels and, per set of at least two labels, the
/// number of connected components of their intersection.
fn parse_strata(text: &str) -> polycomplex::Result<StrataDoc> {
    let doc: StrataDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.schema_version != "STRATA/1" {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("schema_version {:?}, expected \"STRATA/1\"", doc.schema_version),
        });
    }
    Ok(doc)
}
