//! Threshold sweeps over ranked object pairs and the area-under-curve
//! validity indices built on them.
//!
//! Every numerically distinct similarity value is a decision threshold:
//! pairs at or above it are predicted to share a cluster. Tied pairs enter
//! the positive prediction set together, so each curve has one point per
//! tie group. Sorting dominates at `O(P log P)`; each sweep is `O(P)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::slice::ParallelSliceMut;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pairs::{CoMembership, Distances, Similarities};

/// Pair counts of one confusion matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
    pub fn tpr(&self) -> f64 {
        self.tp as f64 / (self.tp + self.fn_) as f64
    }
    pub fn fpr(&self) -> f64 {
        self.fp as f64 / (self.fp + self.tn) as f64
    }
    pub fn precision(&self) -> f64 {
        self.tp as f64 / (self.tp + self.fp) as f64
    }
    pub fn recall(&self) -> f64 {
        self.tpr()
    }
    /// Negative predictive value.
    pub fn inverse_precision(&self) -> f64 {
        self.tn as f64 / (self.tn + self.fn_) as f64
    }
    /// True negative rate.
    pub fn inverse_recall(&self) -> f64 {
        self.tn as f64 / (self.tn + self.fp) as f64
    }
}

/// The curve-based indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurveIndex {
    Aucc,
    Auprc,
    Auiprc,
    Sauprc,
}

impl CurveIndex {
    pub const ALL: [CurveIndex; 4] = [Self::Aucc, Self::Auprc, Self::Auiprc, Self::Sauprc];

    pub fn id(self) -> &'static str {
        match self {
            Self::Aucc => "aucc",
            Self::Auprc => "auprc",
            Self::Auiprc => "auiprc",
            Self::Sauprc => "sauprc",
        }
    }
}

impl fmt::Display for CurveIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CurveIndex {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|c| c.id() == s).ok_or(())
    }
}

/// Pairs ordered by descending similarity, grouped into tie groups.
///
/// Building this once per dataset lets many partitions be swept in `O(P)`
/// each.
#[derive(Debug, Clone)]
pub struct RankedPairs {
    order: Vec<usize>,
    group_ends: Vec<usize>,
    thresholds: Vec<f64>,
}

impl RankedPairs {
    pub fn new(s: &Similarities) -> Result<Self> {
        let values = s.values();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSimilarity);
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.par_sort_unstable_by(|&a, &b| {
            values[b].partial_cmp(&values[a]).unwrap_or(Ordering::Equal)
        });
        let mut group_ends = Vec::new();
        let mut thresholds = Vec::new();
        for (pos, &idx) in order.iter().enumerate() {
            let v = values[idx];
            // `==` treats -0.0 and 0.0 as one value.
            if thresholds.last().is_some_and(|&t: &f64| t == v) {
                *group_ends.last_mut().expect("group exists") = pos + 1;
            } else {
                thresholds.push(v);
                group_ends.push(pos + 1);
            }
        }
        Ok(Self {
            order,
            group_ends,
            thresholds,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn n_groups(&self) -> usize {
        self.group_ends.len()
    }

    /// Pair indices sorted by descending similarity.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Cumulative confusion counts after each tie group.
    pub fn sweep(&self, c: &CoMembership) -> Result<SweepTable> {
        let flags = c.values();
        if flags.len() != self.order.len() {
            return Err(Error::LengthMismatch {
                expected: self.order.len(),
                actual: flags.len(),
            });
        }
        let positives = c.positives();
        if positives == 0 || positives == flags.len() {
            return Err(Error::DegenerateLabels {
                positives,
                total: flags.len(),
            });
        }
        let mut tp = Vec::with_capacity(self.group_ends.len());
        let mut fp = Vec::with_capacity(self.group_ends.len());
        let (mut cum_tp, mut cum_fp) = (0u64, 0u64);
        let mut start = 0;
        for &end in &self.group_ends {
            let pos = self.order[start..end].iter().filter(|&&i| flags[i]).count() as u64;
            cum_tp += pos;
            cum_fp += (end - start) as u64 - pos;
            tp.push(cum_tp);
            fp.push(cum_fp);
            start = end;
        }
        Ok(SweepTable {
            thresholds: self.thresholds.clone(),
            tp,
            fp,
            positives: positives as u64,
            negatives: (flags.len() - positives) as u64,
        })
    }
}

/// One row per distinct similarity threshold, in descending threshold order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    thresholds: Vec<f64>,
    tp: Vec<u64>,
    fp: Vec<u64>,
    positives: u64,
    negatives: u64,
}

impl SweepTable {
    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// `(positive pairs, negative pairs)`.
    pub fn totals(&self) -> (u64, u64) {
        (self.positives, self.negatives)
    }

    pub fn row(&self, t: usize) -> ConfusionCounts {
        ConfusionCounts {
            tp: self.tp[t],
            fp: self.fp[t],
            fn_: self.positives - self.tp[t],
            tn: self.negatives - self.fp[t],
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = ConfusionCounts> + '_ {
        (0..self.len()).map(|t| self.row(t))
    }

    fn empty_prediction(&self) -> ConfusionCounts {
        ConfusionCounts {
            tp: 0,
            fp: 0,
            fn_: self.positives,
            tn: self.negatives,
        }
    }

    /// Trapezoidal ROC area from (0,0) to (1,1), accumulated in integers so it
    /// equals the tie-corrected rank statistic exactly.
    pub fn aucc(&self) -> f64 {
        let (mut prev_tp, mut prev_fp) = (0u128, 0u128);
        let mut twice_area = 0u128;
        for (&tp, &fp) in self.tp.iter().zip(&self.fp) {
            let (tp, fp) = (tp as u128, fp as u128);
            twice_area += (fp - prev_fp) * (tp + prev_tp);
            prev_tp = tp;
            prev_fp = fp;
        }
        twice_area as f64 / (2.0 * self.positives as f64 * self.negatives as f64)
    }

    pub fn auprc(&self) -> f64 {
        pr_area(self.tp.iter().copied().zip(self.fp.iter().copied()), self.positives)
    }

    /// Area relating inverse precision to inverse recall, sweeping thresholds
    /// upward so that pairs below the threshold are predicted negative. This
    /// is exactly the PR area of the label-swapped, similarity-negated problem.
    pub fn auiprc(&self) -> f64 {
        pr_area(self.ascending_prefixes(), self.negatives)
    }

    pub fn sauprc(&self) -> f64 {
        (self.auprc() + self.auiprc()) / 2.0
    }

    pub fn score(&self, index: CurveIndex) -> f64 {
        match index {
            CurveIndex::Aucc => self.aucc(),
            CurveIndex::Auprc => self.auprc(),
            CurveIndex::Auiprc => self.auiprc(),
            CurveIndex::Sauprc => self.sauprc(),
        }
    }

    /// `(tn, fn)` after predicting the lowest `1..=G` tie groups negative.
    fn ascending_prefixes(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (0..self.len()).rev().map(move |t| {
            let (tp_above, fp_above) = if t == 0 {
                (0, 0)
            } else {
                (self.tp[t - 1], self.fp[t - 1])
            };
            (self.negatives - fp_above, self.positives - tp_above)
        })
    }

    pub fn roc_curve(&self) -> Curve {
        let mut points = vec![CurvePoint {
            threshold: f64::INFINITY,
            counts: self.empty_prediction(),
            x: 0.0,
            y: 0.0,
        }];
        points.extend(self.rows().zip(&self.thresholds).map(|(counts, &threshold)| CurvePoint {
            threshold,
            counts,
            x: counts.fpr(),
            y: counts.tpr(),
        }));
        Curve {
            kind: CurveKind::Roc,
            points,
        }
    }

    pub fn pr_curve(&self) -> Curve {
        let first = self.row(0);
        let anchor_y = if first.tp > 0 { first.precision() } else { 0.0 };
        let mut points = vec![CurvePoint {
            threshold: f64::INFINITY,
            counts: self.empty_prediction(),
            x: 0.0,
            y: anchor_y,
        }];
        points.extend(self.rows().zip(&self.thresholds).map(|(counts, &threshold)| CurvePoint {
            threshold,
            counts,
            x: counts.recall(),
            y: counts.precision(),
        }));
        Curve {
            kind: CurveKind::Pr,
            points,
        }
    }

    /// Points carry the threshold at or below which pairs are predicted
    /// negative; counts stay in the original (positive = same cluster) frame.
    pub fn inverse_pr_curve(&self) -> Curve {
        let g = self.len();
        let counts_at = |t: usize| {
            let (tp, fp) = if t == 0 {
                (0, 0)
            } else {
                (self.tp[t - 1], self.fp[t - 1])
            };
            ConfusionCounts {
                tp,
                fp,
                fn_: self.positives - tp,
                tn: self.negatives - fp,
            }
        };
        let first = counts_at(g - 1);
        let anchor_y = if first.tn > 0 {
            first.inverse_precision()
        } else {
            0.0
        };
        let mut points = vec![CurvePoint {
            threshold: f64::NEG_INFINITY,
            counts: ConfusionCounts {
                tp: self.positives,
                fp: self.negatives,
                fn_: 0,
                tn: 0,
            },
            x: 0.0,
            y: anchor_y,
        }];
        points.extend((0..g).rev().map(|t| {
            let counts = counts_at(t);
            CurvePoint {
                threshold: self.thresholds[t],
                counts,
                x: counts.inverse_recall(),
                y: counts.inverse_precision(),
            }
        }));
        Curve {
            kind: CurveKind::InversePr,
            points,
        }
    }
}

/// Trapezoid of precision over recall along cumulative `(tp, fp)` steps,
/// anchored at recall 0 with the first step's precision (0 if it has no
/// true positives). Equal-recall segments contribute nothing.
fn pr_area(steps: impl Iterator<Item = (u64, u64)>, positives: u64) -> f64 {
    let positives = positives as f64;
    let mut prev: Option<(f64, f64)> = None;
    let mut area = 0.0;
    for (tp, fp) in steps {
        let recall = tp as f64 / positives;
        let precision = tp as f64 / (tp + fp) as f64;
        let (prev_recall, prev_precision) =
            prev.unwrap_or((0.0, if tp > 0 { precision } else { 0.0 }));
        if recall > prev_recall {
            area += (recall - prev_recall) * (precision + prev_precision) / 2.0;
        }
        prev = Some((recall, precision));
    }
    area
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Roc,
    Pr,
    InversePr,
}

impl CurveKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Roc => "roc",
            Self::Pr => "pr",
            Self::InversePr => "inverse_pr",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub threshold: f64,
    pub counts: ConfusionCounts,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub kind: CurveKind,
    pub points: Vec<CurvePoint>,
}

impl Curve {
    /// Trapezoidal area under the points in order.
    pub fn area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| {
                let dx = w[1].x - w[0].x;
                if dx > 0.0 {
                    dx * (w[1].y + w[0].y) / 2.0
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Writes `threshold,tp,fp,fn,tn,x,y` rows.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["threshold", "tp", "fp", "fn", "tn", "x", "y"])?;
        for p in &self.points {
            w.write_record([
                p.threshold.to_string(),
                p.counts.tp.to_string(),
                p.counts.fp.to_string(),
                p.counts.fn_.to_string(),
                p.counts.tn.to_string(),
                p.x.to_string(),
                p.y.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<curve>", e))?;
        Ok(())
    }
}

pub fn confusion_sweep(s: &Similarities, c: &CoMembership) -> Result<SweepTable> {
    check_lengths(s, c)?;
    RankedPairs::new(s)?.sweep(c)
}

pub fn aucc(s: &Similarities, c: &CoMembership) -> Result<f64> {
    Ok(confusion_sweep(s, c)?.aucc())
}

pub fn auprc(s: &Similarities, c: &CoMembership) -> Result<f64> {
    Ok(confusion_sweep(s, c)?.auprc())
}

pub fn auiprc(s: &Similarities, c: &CoMembership) -> Result<f64> {
    Ok(confusion_sweep(s, c)?.auiprc())
}

pub fn sauprc(s: &Similarities, c: &CoMembership) -> Result<f64> {
    Ok(confusion_sweep(s, c)?.sauprc())
}

fn check_lengths<T, U>(
    a: &crate::pairs::CondensedPairVector<T>,
    b: &crate::pairs::CondensedPairVector<U>,
) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(())
}

/// Baker-Hubert Gamma by exhaustive comparison of every within-cluster
/// distance with every between-cluster distance. Quadratic in the pair count;
/// intended as a reference for small inputs.
pub fn gamma_baker_hubert(d: &Distances, c: &CoMembership) -> Result<f64> {
    check_lengths(d, c)?;
    let (within, between): (Vec<(f64, bool)>, Vec<(f64, bool)>) = d
        .values()
        .iter()
        .zip(c.values())
        .map(|(&v, &f)| (v, f))
        .partition(|&(_, f)| f);
    if within.is_empty() || between.is_empty() {
        return Err(Error::DegenerateLabels {
            positives: within.len(),
            total: d.len(),
        });
    }
    let (mut concordant, mut discordant) = (0u64, 0u64);
    for &(w, _) in &within {
        for &(b, _) in &between {
            if w < b {
                concordant += 1;
            } else if w > b {
                discordant += 1;
            }
        }
    }
    if concordant + discordant == 0 {
        return Err(Error::UndefinedGamma);
    }
    Ok((concordant as f64 - discordant as f64) / (concordant + discordant) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::CondensedPairVector;

    fn sims(v: &[f64]) -> Similarities {
        CondensedPairVector::new(4, v.to_vec()).unwrap()
    }

    fn flags(v: &[u8]) -> CoMembership {
        CondensedPairVector::new(4, v.iter().map(|&b| b == 1).collect()).unwrap()
    }

    // Four points {0,1,10,11} on a line, clusters {0,1},{10,11}.
    fn separated() -> (Similarities, CoMembership) {
        (
            sims(&[-1.0, -9.0, -10.0, -10.0, -11.0, -1.0]),
            flags(&[1, 0, 0, 0, 0, 1]),
        )
    }

    // Positives at the two -2 pairs.
    fn interleaved() -> (Similarities, CoMembership) {
        (
            sims(&[-1.0, -2.0, -2.0, -3.0, -3.0, -5.0]),
            flags(&[0, 1, 1, 0, 0, 0]),
        )
    }

    fn tp_fp(t: &SweepTable) -> Vec<(u64, u64)> {
        t.rows().map(|r| (r.tp, r.fp)).collect()
    }

    #[test]
    fn sweep_examples() {
        let (s, c) = separated();
        let t = confusion_sweep(&s, &c).unwrap();
        assert_eq!(t.row(0).tp, 2);
        assert_eq!(t.row(0).fp, 0);
        assert_eq!((t.row(t.len() - 1).tp, t.row(t.len() - 1).fp), (2, 4));
        assert_eq!(t.thresholds(), &[-1.0, -9.0, -10.0, -11.0]);

        let (s, c) = interleaved();
        let t = confusion_sweep(&s, &c).unwrap();
        assert_eq!(tp_fp(&t), vec![(0, 1), (2, 1), (2, 3), (2, 4)]);
        for r in t.rows() {
            assert_eq!(r.total(), 6);
            assert_eq!(r.tp + r.fn_, 2);
        }

        let flat = sims(&[3.0; 6]);
        let t = confusion_sweep(&flat, &interleaved().1).unwrap();
        assert_eq!(tp_fp(&t), vec![(2, 4)]);
    }

    #[test]
    fn single_class_is_rejected() {
        let (s, _) = separated();
        assert!(matches!(
            confusion_sweep(&s, &flags(&[0; 6])),
            Err(Error::DegenerateLabels { .. })
        ));
        assert!(confusion_sweep(&s, &flags(&[1; 6])).is_err());
        let bad = sims(&[f64::NAN, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(confusion_sweep(&bad, &separated().1), Err(Error::NonFiniteSimilarity)));
    }

    #[test]
    fn aucc_examples() {
        let (s, c) = separated();
        assert_eq!(aucc(&s, &c).unwrap(), 1.0);
        assert_eq!(aucc(&-&s, &c).unwrap(), 0.0);
        let (s, c) = interleaved();
        assert_eq!(aucc(&s, &c).unwrap(), 0.75);
    }

    #[test]
    fn pr_examples() {
        let (s, c) = separated();
        assert_eq!(auprc(&s, &c).unwrap(), 1.0);
        assert_eq!(auiprc(&s, &c).unwrap(), 1.0);
        assert_eq!(sauprc(&s, &c).unwrap(), 1.0);

        let (s, c) = interleaved();
        assert!((auprc(&s, &c).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        // Mirrored sweep by hand: ascending groups -5 (neg), -3 (2 neg),
        // -2 (2 pos), -1 (neg). Cumulative (tn, fn): (1,0), (3,0), (3,2), (4,2).
        // Inverse recall/precision: (1/4, 1), (3/4, 1), (3/4, 3/5), (1, 2/3).
        // Anchor (0, 1). Area = 1/4 + 1/2 + 0 + 1/4 * (3/5 + 2/3) / 2.
        let expected_inverse = 0.25 + 0.5 + 0.25 * (0.6 + 2.0 / 3.0) / 2.0;
        let inverse = auiprc(&s, &c).unwrap();
        assert!((inverse - expected_inverse).abs() < 1e-15);
        let sym = sauprc(&s, &c).unwrap();
        assert!((sym - (1.0 / 3.0 + expected_inverse) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn curves_match_areas() {
        let (s, c) = interleaved();
        let t = confusion_sweep(&s, &c).unwrap();
        let roc = t.roc_curve();
        assert_eq!(roc.points.first().map(|p| (p.x, p.y)), Some((0.0, 0.0)));
        assert_eq!(roc.points.last().map(|p| (p.x, p.y)), Some((1.0, 1.0)));
        assert!((roc.area() - t.aucc()).abs() < 1e-15);
        assert!((t.pr_curve().area() - t.auprc()).abs() < 1e-15);
        assert!((t.inverse_pr_curve().area() - t.auiprc()).abs() < 1e-15);
        for curve in [roc, t.pr_curve(), t.inverse_pr_curve()] {
            assert!(curve.points.windows(2).all(|w| w[0].x <= w[1].x));
            assert!(curve.points.iter().all(|p| (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y)));
        }
    }

    #[test]
    fn curve_csv_has_expected_header() {
        let (s, c) = separated();
        let mut buf = Vec::new();
        confusion_sweep(&s, &c).unwrap().pr_curve().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("threshold,tp,fp,fn,tn,x,y\ninf,0,0,2,4,0,1\n"));
    }

    #[test]
    fn gamma_examples() {
        let d_sep = CondensedPairVector::new(4, vec![1.0, 9.0, 10.0, 10.0, 11.0, 1.0]).unwrap();
        let c = separated().1;
        assert_eq!(gamma_baker_hubert(&d_sep, &c).unwrap(), 1.0);
        assert_eq!(gamma_baker_hubert(&-&d_sep, &c).unwrap(), -1.0);
        let (s, c) = interleaved();
        let d = -&s;
        assert_eq!(gamma_baker_hubert(&d, &c).unwrap(), 0.5);
        let flat = CondensedPairVector::new(4, vec![2.0; 6]).unwrap();
        assert!(matches!(gamma_baker_hubert(&flat, &c), Err(Error::UndefinedGamma)));
    }
}
