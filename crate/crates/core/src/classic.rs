//! Classical relative validity indices.
//!
//! Centroid-based indices (`db`, `pbm`, `vrc`, `ratkowsky_lance`) read the
//! feature matrix; pair-based ones (`swc`, `c_index`, `dunn`,
//! `point_biserial`) read only the condensed distances.

use std::fmt;
use std::str::FromStr;

use crate::dataset::{Dataset, Partition};
use crate::error::{Error, Result};
use crate::pairs::Distances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassicIndex {
    Swc,
    Db,
    CIndex,
    Dunn,
    Pbm,
    Vrc,
    PointBiserial,
    RatkowskyLance,
}

impl ClassicIndex {
    pub const ALL: [ClassicIndex; 8] = [
        Self::Swc,
        Self::Db,
        Self::CIndex,
        Self::Dunn,
        Self::Pbm,
        Self::Vrc,
        Self::PointBiserial,
        Self::RatkowskyLance,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Swc => "swc",
            Self::Db => "db",
            Self::CIndex => "c_index",
            Self::Dunn => "dunn",
            Self::Pbm => "pbm",
            Self::Vrc => "vrc",
            Self::PointBiserial => "point_biserial",
            Self::RatkowskyLance => "ratkowsky_lance",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Self::Db | Self::CIndex => Direction::Minimize,
            _ => Direction::Maximize,
        }
    }
}

impl fmt::Display for ClassicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ClassicIndex {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|c| c.id() == s).ok_or(())
    }
}

/// Maps a score so that larger is better: negated for minimize-direction indices.
pub fn orient(which: ClassicIndex, score: f64) -> f64 {
    match which.direction() {
        Direction::Maximize => score,
        Direction::Minimize => -score,
    }
}

/// Partition-independent summaries of the distance vector, reused across
/// every partition of one dataset.
#[derive(Debug, Clone)]
pub struct DistanceProfile {
    /// `prefix[i]` is the sum of the `i` smallest distances.
    prefix: Vec<f64>,
    /// `suffix[i]` is the sum of the `i` largest distances.
    suffix: Vec<f64>,
    std: f64,
}

impl DistanceProfile {
    pub fn new(d: &Distances) -> Self {
        let mut sorted = d.values().to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        Self::from_sorted(&sorted)
    }

    /// `sorted` must be in ascending order.
    pub fn from_sorted(sorted: &[f64]) -> Self {
        let mut prefix = Vec::with_capacity(sorted.len() + 1);
        let mut acc = 0.0;
        prefix.push(0.0);
        for &v in sorted {
            acc += v;
            prefix.push(acc);
        }
        let mut suffix = Vec::with_capacity(sorted.len() + 1);
        suffix.push(0.0);
        let mut top = 0.0;
        for &v in sorted.iter().rev() {
            top += v;
            suffix.push(top);
        }
        let n = sorted.len() as f64;
        let mean = acc / n;
        let var = sorted.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Self {
            prefix,
            suffix,
            std: var.sqrt(),
        }
    }

    fn smallest(&self, count: usize) -> f64 {
        self.prefix[count]
    }

    fn largest(&self, count: usize) -> f64 {
        self.suffix[count]
    }
}

pub fn compute_index(
    which: ClassicIndex,
    data: &Dataset,
    d: &Distances,
    p: &Partition,
) -> Result<f64> {
    check(data, d, p)?;
    match which {
        ClassicIndex::CIndex | ClassicIndex::PointBiserial => {
            compute_index_with(which, data, d, &DistanceProfile::new(d), p)
        }
        _ => dispatch(which, data, d, None, p),
    }
}

/// As [`compute_index`], with a precomputed distance profile.
pub fn compute_index_with(
    which: ClassicIndex,
    data: &Dataset,
    d: &Distances,
    profile: &DistanceProfile,
    p: &Partition,
) -> Result<f64> {
    check(data, d, p)?;
    dispatch(which, data, d, Some(profile), p)
}

fn check(data: &Dataset, d: &Distances, p: &Partition) -> Result<()> {
    let n = data.n_objects();
    if p.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: p.len(),
        });
    }
    if d.n_objects() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: d.n_objects(),
        });
    }
    Ok(())
}

fn dispatch(
    which: ClassicIndex,
    data: &Dataset,
    d: &Distances,
    profile: Option<&DistanceProfile>,
    p: &Partition,
) -> Result<f64> {
    let profile = || profile.expect("profile supplied for pair-ranking indices");
    match which {
        ClassicIndex::Swc => Ok(silhouette(d, p)),
        ClassicIndex::Db => davies_bouldin(data, p),
        ClassicIndex::CIndex => c_index(d, profile(), p),
        ClassicIndex::Dunn => dunn(d, p),
        ClassicIndex::Pbm => pbm(data, p),
        ClassicIndex::Vrc => calinski_harabasz(data, p),
        ClassicIndex::PointBiserial => point_biserial(d, profile(), p),
        ClassicIndex::RatkowskyLance => ratkowsky_lance(data, p),
    }
}

fn undefined(index: ClassicIndex, reason: &'static str) -> Error {
    Error::UndefinedScore {
        index: index.id(),
        reason,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    sq_dist(a, b).sqrt()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cluster centroids (k × m, row-major) and the grand centroid.
struct Centroids {
    m: usize,
    clusters: Vec<f64>,
    grand: Vec<f64>,
    sizes: Vec<usize>,
}

impl Centroids {
    fn new(data: &Dataset, p: &Partition) -> Self {
        let m = data.n_features();
        let sizes = p.sizes();
        let mut clusters = vec![0.0; p.k() * m];
        let mut grand = vec![0.0; m];
        for (row, &l) in data.rows().zip(p.labels()) {
            for (f, &v) in row.iter().enumerate() {
                clusters[l * m + f] += v;
                grand[f] += v;
            }
        }
        for (l, &s) in sizes.iter().enumerate() {
            clusters[l * m..(l + 1) * m].iter_mut().for_each(|v| *v /= s as f64);
        }
        let n = data.n_objects() as f64;
        grand.iter_mut().for_each(|v| *v /= n);
        Self {
            m,
            clusters,
            grand,
            sizes,
        }
    }

    fn of(&self, l: usize) -> &[f64] {
        &self.clusters[l * self.m..(l + 1) * self.m]
    }

    fn k(&self) -> usize {
        self.sizes.len()
    }
}

fn silhouette(d: &Distances, p: &Partition) -> f64 {
    let labels = p.labels();
    let n = labels.len();
    let k = p.k();
    let sizes = p.sizes();
    // sums[i * k + l]: total distance from object i to members of cluster l.
    let mut sums = vec![0.0; n * k];
    let mut values = d.values().iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = *values.next().expect("condensed length checked");
            sums[i * k + labels[j]] += v;
            sums[j * k + labels[i]] += v;
        }
    }
    let mut total = 0.0;
    for i in 0..n {
        let own = labels[i];
        if sizes[own] == 1 {
            continue;
        }
        let a = sums[i * k + own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&l| l != own)
            .map(|l| sums[i * k + l] / sizes[l] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / n as f64
}

fn davies_bouldin(data: &Dataset, p: &Partition) -> Result<f64> {
    let c = Centroids::new(data, p);
    let k = c.k();
    let mut scatter = vec![0.0; k];
    for (row, &l) in data.rows().zip(p.labels()) {
        scatter[l] += dist(row, c.of(l));
    }
    for (s, &size) in scatter.iter_mut().zip(&c.sizes) {
        *s /= size as f64;
    }
    let mut total = 0.0;
    for i in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for j in (0..k).filter(|&j| j != i) {
            let sep = dist(c.of(i), c.of(j));
            if sep == 0.0 {
                return Err(undefined(ClassicIndex::Db, "two clusters share a centroid"));
            }
            worst = worst.max((scatter[i] + scatter[j]) / sep);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

fn c_index(d: &Distances, profile: &DistanceProfile, p: &Partition) -> Result<f64> {
    let labels = p.labels();
    let n = labels.len();
    let mut within_sum = 0.0;
    let mut within_count = 0usize;
    let mut values = d.values().iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = *values.next().expect("condensed length checked");
            if labels[i] == labels[j] {
                within_sum += v;
                within_count += 1;
            }
        }
    }
    let s_min = profile.smallest(within_count);
    let s_max = profile.largest(within_count);
    if s_max == s_min {
        return Err(undefined(ClassicIndex::CIndex, "extreme within-pair sums coincide"));
    }
    // Summation order differs between the three sums; clamp the rounding residue.
    Ok(((within_sum - s_min) / (s_max - s_min)).clamp(0.0, 1.0))
}

fn dunn(d: &Distances, p: &Partition) -> Result<f64> {
    let labels = p.labels();
    let n = labels.len();
    let mut min_between = f64::INFINITY;
    let mut max_within = 0.0f64;
    let mut values = d.values().iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = *values.next().expect("condensed length checked");
            if labels[i] == labels[j] {
                max_within = max_within.max(v);
            } else {
                min_between = min_between.min(v);
            }
        }
    }
    if max_within == 0.0 {
        return Err(undefined(ClassicIndex::Dunn, "every cluster has zero diameter"));
    }
    Ok(min_between / max_within)
}

fn pbm(data: &Dataset, p: &Partition) -> Result<f64> {
    let c = Centroids::new(data, p);
    let k = c.k();
    let mut e1 = 0.0;
    let mut ek = 0.0;
    for (row, &l) in data.rows().zip(p.labels()) {
        e1 += dist(row, &c.grand);
        ek += dist(row, c.of(l));
    }
    if ek == 0.0 {
        return Err(undefined(ClassicIndex::Pbm, "zero within-cluster dispersion"));
    }
    let mut dk = 0.0f64;
    for i in 0..k {
        for j in i + 1..k {
            dk = dk.max(dist(c.of(i), c.of(j)));
        }
    }
    let inner = (e1 / ek) * dk / k as f64;
    Ok(inner * inner)
}

fn calinski_harabasz(data: &Dataset, p: &Partition) -> Result<f64> {
    let c = Centroids::new(data, p);
    let k = c.k();
    let n = data.n_objects();
    let between: f64 = (0..k)
        .map(|l| c.sizes[l] as f64 * sq_dist(c.of(l), &c.grand))
        .sum();
    let within: f64 = data
        .rows()
        .zip(p.labels())
        .map(|(row, &l)| sq_dist(row, c.of(l)))
        .sum();
    if within == 0.0 {
        return Err(undefined(ClassicIndex::Vrc, "zero within-cluster scatter"));
    }
    Ok((between / (k - 1) as f64) / (within / (n - k) as f64))
}

fn point_biserial(d: &Distances, profile: &DistanceProfile, p: &Partition) -> Result<f64> {
    if profile.std == 0.0 {
        return Err(undefined(ClassicIndex::PointBiserial, "all distances are equal"));
    }
    let labels = p.labels();
    let n = labels.len();
    let (mut sum_w, mut sum_b) = (0.0, 0.0);
    let (mut n_w, mut n_b) = (0usize, 0usize);
    let mut values = d.values().iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = *values.next().expect("condensed length checked");
            if labels[i] == labels[j] {
                sum_w += v;
                n_w += 1;
            } else {
                sum_b += v;
                n_b += 1;
            }
        }
    }
    let (n_w, n_b) = (n_w as f64, n_b as f64);
    let n_t = n_w + n_b;
    Ok((sum_b / n_b - sum_w / n_w) * (n_w * n_b).sqrt() / n_t / profile.std)
}

fn ratkowsky_lance(data: &Dataset, p: &Partition) -> Result<f64> {
    let c = Centroids::new(data, p);
    let m = c.m;
    let mut sst = vec![0.0; m];
    for row in data.rows() {
        for f in 0..m {
            let dv = row[f] - c.grand[f];
            sst[f] += dv * dv;
        }
    }
    let mut ratio_sum = 0.0;
    for f in 0..m {
        if sst[f] == 0.0 {
            return Err(undefined(ClassicIndex::RatkowskyLance, "constant attribute"));
        }
        let ssb: f64 = (0..c.k())
            .map(|l| {
                let dv = c.of(l)[f] - c.grand[f];
                c.sizes[l] as f64 * dv * dv
            })
            .sum();
        ratio_sum += ssb / sst[f];
    }
    Ok((ratio_sum / m as f64).sqrt() / (c.k() as f64).sqrt())
}
