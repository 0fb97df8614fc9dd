//! The full roster of relative indices and a per-dataset scoring context.

use std::fmt;
use std::str::FromStr;

use crate::classic::{compute_index_with, ClassicIndex, Direction, DistanceProfile};
use crate::curves::{CurveIndex, RankedPairs};
use crate::dataset::{Dataset, Partition};
use crate::error::{Error, Result};
use crate::pairs::{euclidean_distances, pairwise_co_membership, similarities_from_distances, Distances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cvi {
    Curve(CurveIndex),
    Classic(ClassicIndex),
}

impl Cvi {
    pub const ALL: [Cvi; 12] = [
        Cvi::Curve(CurveIndex::Aucc),
        Cvi::Curve(CurveIndex::Auprc),
        Cvi::Curve(CurveIndex::Auiprc),
        Cvi::Curve(CurveIndex::Sauprc),
        Cvi::Classic(ClassicIndex::Swc),
        Cvi::Classic(ClassicIndex::Db),
        Cvi::Classic(ClassicIndex::CIndex),
        Cvi::Classic(ClassicIndex::Dunn),
        Cvi::Classic(ClassicIndex::Pbm),
        Cvi::Classic(ClassicIndex::Vrc),
        Cvi::Classic(ClassicIndex::PointBiserial),
        Cvi::Classic(ClassicIndex::RatkowskyLance),
    ];

    pub fn id(self) -> &'static str {
        match self {
            Cvi::Curve(c) => c.id(),
            Cvi::Classic(c) => c.id(),
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Cvi::Curve(_) => Direction::Maximize,
            Cvi::Classic(c) => c.direction(),
        }
    }

    /// Larger-is-better form of a raw score.
    pub fn orient(self, score: f64) -> f64 {
        match self.direction() {
            Direction::Maximize => score,
            Direction::Minimize => -score,
        }
    }

    /// Parses a comma-separated id list; `all` expands to every index.
    pub fn parse_list(list: &str) -> Result<Vec<Cvi>> {
        let mut out = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if item == "all" {
                out.extend(Cvi::ALL);
            } else {
                out.push(item.parse()?);
            }
        }
        if out.is_empty() {
            return Err(Error::UnknownIndex {
                given: list.to_string(),
                valid: valid_ids(),
            });
        }
        let mut seen = Vec::new();
        out.retain(|c| {
            let fresh = !seen.contains(c);
            seen.push(*c);
            fresh
        });
        Ok(out)
    }
}

fn valid_ids() -> String {
    Cvi::ALL.iter().map(|c| c.id()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Cvi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Cvi {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Cvi::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::UnknownIndex {
                given: s.to_string(),
                valid: valid_ids(),
            })
    }
}

/// Distances, the similarity ranking and the sorted-distance profile of one
/// dataset, computed once and shared by every partition scored against it.
pub struct Scorer<'a> {
    data: &'a Dataset,
    distances: Distances,
    ranked: RankedPairs,
    profile: DistanceProfile,
}

impl<'a> Scorer<'a> {
    pub fn new(data: &'a Dataset) -> Result<Self> {
        Self::with_distances(data, euclidean_distances(data))
    }

    pub fn with_distances(data: &'a Dataset, distances: Distances) -> Result<Self> {
        if distances.n_objects() != data.n_objects() {
            return Err(Error::LengthMismatch {
                expected: data.n_objects(),
                actual: distances.n_objects(),
            });
        }
        let ranked = RankedPairs::new(&similarities_from_distances(&distances))?;
        // Descending similarity is ascending distance.
        let ascending: Vec<f64> = ranked.order().iter().map(|&i| distances.values()[i]).collect();
        let profile = DistanceProfile::from_sorted(&ascending);
        Ok(Self {
            data,
            distances,
            ranked,
            profile,
        })
    }

    pub fn data(&self) -> &Dataset {
        self.data
    }

    pub fn distances(&self) -> &Distances {
        &self.distances
    }

    pub fn ranked(&self) -> &RankedPairs {
        &self.ranked
    }

    /// Raw (unoriented) score.
    pub fn score(&self, cvi: Cvi, p: &Partition) -> Result<f64> {
        self.score_many(&[cvi], p).pop().expect("one result per index")
    }

    /// Raw scores for several indices, sharing one threshold sweep.
    pub fn score_many(&self, cvis: &[Cvi], p: &Partition) -> Vec<Result<f64>> {
        let needs_sweep = cvis.iter().any(|c| matches!(c, Cvi::Curve(_)));
        let sweep = if needs_sweep {
            Some(self.ranked.sweep(&pairwise_co_membership(p)))
        } else {
            None
        };
        cvis.iter()
            .map(|&cvi| match cvi {
                Cvi::Curve(c) => match sweep.as_ref().expect("sweep computed") {
                    Ok(table) => Ok(table.score(c)),
                    Err(e) => Err(clone_err(e)),
                },
                Cvi::Classic(c) => compute_index_with(c, self.data, &self.distances, &self.profile, p),
            })
            .collect()
    }
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::DegenerateLabels { positives, total } => Error::DegenerateLabels {
            positives: *positives,
            total: *total,
        },
        Error::LengthMismatch { expected, actual } => Error::LengthMismatch {
            expected: *expected,
            actual: *actual,
        },
        other => Error::Protocol(other.to_string()),
    }
}
