use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::parasites::{ParasiticRecord, SpanAssignment};
use super::subspace::ProjectiveSubspace;
use crate::complex::{FaceId, PolyhedralComplex};
use crate::error::{Error, Result};

/// Two distinct centers of one stage and one face meet inside a center of
/// an earlier stage, or not at all.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub face: FaceId,
    pub first: usize,
    pub second: usize,
    pub intersection: ProjectiveSubspace,
    /// `(stage, index)` of the covering center; absent when the
    /// intersection is empty.
    pub covered_by: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpStage {
    pub dimension: usize,
    pub centers: BTreeMap<FaceId, Vec<ProjectiveSubspace>>,
    pub certificates: Vec<SeparationCertificate>,
}

/// Blow-up centers grouped by dimension, lowest first, with separation
/// certificates for every stage after the first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowUpLedger {
    pub ambient_dim: usize,
    pub stages: Vec<BlowUpStage>,
    /// Morphisms along which image and preimage consistency was checked.
    pub equivariance_checks: usize,
}

impl BlowUpLedger {
    pub fn center_count(&self) -> usize {
        self.stages.iter().flat_map(|s| s.centers.values()).map(Vec::len).sum()
    }

    pub fn centers_of(&self, face: FaceId) -> impl Iterator<Item = &ProjectiveSubspace> + '_ {
        self.stages.iter().filter_map(move |s| s.centers.get(&face)).flatten()
    }
}

/// Schedules the saturated records as blow-up centers and certifies the
/// schedule: no center is a whole span, the centers of each face are stable
/// under images and non-empty preimages along morphisms, and at every stage
/// `d >= 1` two distinct `d`-dimensional centers of a face meet inside a
/// lower-dimensional center of that face.
pub fn blowup_plan(c: &PolyhedralComplex, a: &SpanAssignment, saturated: &[ParasiticRecord]) -> Result<BlowUpLedger> {
    let mut per_face: BTreeMap<FaceId, BTreeSet<ProjectiveSubspace>> = BTreeMap::new();
    for r in saturated {
        let span = a.span(r.ambient_face)?;
        if r.subspace == *span || r.subspace.is_empty() || !span.contains(&r.subspace) {
            return Err(Error::Inconsistent(format!(
                "center {} is not a proper non-empty subspace of the span of face {}",
                r.subspace, r.ambient_face
            )));
        }
        per_face.entry(r.ambient_face).or_default().insert(r.subspace.clone());
    }

    let mut checks = 0;
    for &(lo, hi) in c.morphisms() {
        checks += 1;
        let empty = BTreeSet::new();
        let lo_centers = per_face.get(&lo).unwrap_or(&empty);
        let hi_centers = per_face.get(&hi).unwrap_or(&empty);
        if let Some(s) = lo_centers.iter().find(|s| !hi_centers.contains(s)) {
            return Err(Error::Inconsistent(format!("center {s} of face {lo} has no image in face {hi}")));
        }
        let lo_span = a.span(lo)?;
        for s in hi_centers {
            let pre = s.intersect(lo_span);
            if !pre.is_empty() && !lo_centers.contains(&pre) {
                return Err(Error::Inconsistent(format!("preimage of {s} in face {lo} is not a center")));
            }
        }
    }

    let top = per_face.values().flatten().map(|s| s.dimension()).max().unwrap_or(-1);
    let mut stages: Vec<BlowUpStage> = Vec::new();
    for d in 0..=top {
        let centers: BTreeMap<FaceId, Vec<ProjectiveSubspace>> = per_face
            .iter()
            .map(|(&f, set)| (f, set.iter().filter(|s| s.dimension() == d).cloned().collect::<Vec<_>>()))
            .filter(|(_, v)| !v.is_empty())
            .collect();
        let mut certificates = Vec::new();
        if d > 0 {
            for (&face, list) in &centers {
                for i in 0..list.len() {
                    for j in i + 1..list.len() {
                        let meet = list[i].intersect(&list[j]);
                        let covered_by = if meet.is_empty() {
                            None
                        } else {
                            let cover = stages.iter().enumerate().find_map(|(k, st)| {
                                st.centers
                                    .get(&face)
                                    .and_then(|lower| lower.iter().position(|l| l.contains(&meet)))
                                    .map(|idx| (k, idx))
                            });
                            match cover {
                                Some(x) => Some(x),
                                None => {
                                    return Err(Error::Inconsistent(format!(
                                        "centers {} and {} of face {face} meet in {meet} outside earlier stages",
                                        list[i], list[j]
                                    )))
                                }
                            }
                        };
                        certificates.push(SeparationCertificate {
                            face,
                            first: i,
                            second: j,
                            intersection: meet,
                            covered_by,
                        });
                    }
                }
            }
        }
        stages.push(BlowUpStage {
            dimension: d as usize,
            centers,
            certificates,
        });
    }
    Ok(BlowUpLedger {
        ambient_dim: c.ambient_dim(),
        stages,
        equivariance_checks: checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::rational::int;
    use crate::polyhedra::{LinearInequality, RationalPolyhedron};
    use crate::projective::{parasitic_intersections, saturate, span_assignment, verify_proper};

    fn ledger_of(cell: RationalPolyhedron) -> (PolyhedralComplex, BlowUpLedger) {
        let c = PolyhedralComplex::from_subdivision(&[cell]).unwrap();
        let a = span_assignment(&c).unwrap();
        let s = saturate(&c, &a, &parasitic_intersections(&c, &a));
        assert!(verify_proper(&c, &a, &s).unwrap().passed);
        let ledger = blowup_plan(&c, &a, &s).unwrap();
        (c, ledger)
    }

    #[test]
    fn square_schedules_points_only() {
        let (c, ledger) = ledger_of(RationalPolyhedron::closed_box(&[int(0), int(0)], &[int(1), int(1)]).unwrap());
        assert_eq!(ledger.stages.len(), 1);
        let square = c.face_ids().find(|&f| c.face(f).unwrap().dim == 2).unwrap();
        assert_eq!(ledger.stages[0].centers[&square].len(), 2);
        assert_eq!(ledger.center_count(), 6);
    }

    #[test]
    fn cube_lines_meet_in_scheduled_points() {
        let (c, ledger) = ledger_of(RationalPolyhedron::closed_box(&vec![int(0); 3], &vec![int(1); 3]).unwrap());
        assert_eq!(ledger.stages.len(), 2);
        let cube = c.face_ids().find(|&f| c.face(f).unwrap().dim == 3).unwrap();
        assert_eq!(ledger.stages[1].centers[&cube].len(), 3);
        let certs: Vec<_> = ledger.stages[1].certificates.iter().filter(|k| k.face == cube).collect();
        assert_eq!(certs.len(), 3);
        for k in certs {
            assert_eq!(k.intersection.dimension(), 0);
            let (stage, idx) = k.covered_by.unwrap();
            assert_eq!(stage, 0);
            assert_eq!(ledger.stages[0].centers[&cube][idx], k.intersection);
        }
    }

    #[test]
    fn cube_in_four_space() {
        let mut ineqs: Vec<LinearInequality> = (0..3)
            .flat_map(|i| [LinearInequality::lower_bound(4, i, int(0)), LinearInequality::upper_bound(4, i, int(1))])
            .collect();
        ineqs.push(LinearInequality::lower_bound(4, 3, int(0)));
        ineqs.push(LinearInequality::upper_bound(4, 3, int(0)));
        let (_, ledger) = ledger_of(RationalPolyhedron::new(4, ineqs).unwrap());
        assert_eq!(ledger.stages.len(), 2);
        assert!(ledger.stages.iter().all(|s| s.centers.values().flatten().all(|x| x.dimension() <= 2)));
        let text = serde_json::to_string(&ledger).unwrap();
        assert_eq!(serde_json::from_str::<BlowUpLedger>(&text).unwrap(), ledger);
    }
}
