//! Agglomerative clustering by Lance-Williams updates.
//!
//! Each live cluster caches its nearest neighbour; only rows whose cached
//! neighbour was consumed by a merge are rescanned. Ties between equal
//! dissimilarities resolve to the lexicographically smallest
//! `(cluster id, cluster id)` pair, with leaves numbered `0..n` and the
//! cluster formed by merge `t` numbered `n + t`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::dataset::Partition;
use crate::error::{Error, Result};
use crate::pairs::Distances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Linkage {
    Single,
    Average,
    Complete,
    /// Operates on squared Euclidean distances; heights are the increase in
    /// within-cluster sum of squares.
    Ward,
}

impl Linkage {
    pub const ALL: [Linkage; 4] = [Self::Single, Self::Average, Self::Complete, Self::Ward];

    pub fn name(self) -> &'static str {
        match self {
            Self::Single => "single",
            Self::Average => "average",
            Self::Complete => "complete",
            Self::Ward => "ward",
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Linkage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    /// Smaller of the two merged cluster ids.
    pub left: usize,
    pub right: usize,
    pub height: f64,
    /// Objects in the new cluster.
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeTree {
    n: usize,
    merges: Vec<Merge>,
}

impl MergeTree {
    pub fn n_leaves(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn heights(&self) -> impl Iterator<Item = f64> + '_ {
        self.merges.iter().map(|m| m.height)
    }
}

struct Agglomerator {
    n: usize,
    d: Vec<f64>,
    ids: Vec<usize>,
    sizes: Vec<usize>,
    live: Vec<bool>,
    nn: Vec<usize>,
}

impl Agglomerator {
    fn at(&self, a: usize, b: usize) -> f64 {
        self.d[a * self.n + b]
    }

    fn set(&mut self, a: usize, b: usize, v: f64) {
        self.d[a * self.n + b] = v;
        self.d[b * self.n + a] = v;
    }

    fn key(&self, a: usize, b: usize) -> (f64, usize, usize) {
        let (x, y) = (self.ids[a], self.ids[b]);
        (self.at(a, b), x.min(y), x.max(y))
    }

    fn less(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        let (ka, kb) = (self.key(a.0, a.1), self.key(b.0, b.1));
        match ka.0.partial_cmp(&kb.0).unwrap_or(Ordering::Equal) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => (ka.1, ka.2) < (kb.1, kb.2),
        }
    }

    fn rescan(&mut self, a: usize) {
        let mut best = usize::MAX;
        for b in 0..self.n {
            if b == a || !self.live[b] {
                continue;
            }
            if best == usize::MAX || self.less((a, b), (a, best)) {
                best = b;
            }
        }
        self.nn[a] = best;
    }
}

pub fn hac_merge_tree(d: &Distances, linkage: Linkage) -> MergeTree {
    let n = d.n_objects();
    let mut full = vec![0.0; n * n];
    let mut values = d.values().iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = *values.next().expect("condensed length");
            let v = if linkage == Linkage::Ward { v * v } else { v };
            full[i * n + j] = v;
            full[j * n + i] = v;
        }
    }
    let mut state = Agglomerator {
        n,
        d: full,
        ids: (0..n).collect(),
        sizes: vec![1; n],
        live: vec![true; n],
        nn: vec![usize::MAX; n],
    };
    for a in 0..n {
        state.rescan(a);
    }

    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    for step in 0..n.saturating_sub(1) {
        let mut a = usize::MAX;
        for x in (0..n).filter(|&x| state.live[x]) {
            if a == usize::MAX || state.less((x, state.nn[x]), (a, state.nn[a])) {
                a = x;
            }
        }
        let b = state.nn[a];
        let dab = state.at(a, b);
        let (na, nb) = (state.sizes[a] as f64, state.sizes[b] as f64);
        let (ida, idb) = (state.ids[a], state.ids[b]);
        merges.push(Merge {
            left: ida.min(idb),
            right: ida.max(idb),
            height: if linkage == Linkage::Ward { dab / 2.0 } else { dab },
            size: state.sizes[a] + state.sizes[b],
        });

        for x in 0..n {
            if x == a || x == b || !state.live[x] {
                continue;
            }
            let (dxa, dxb) = (state.at(x, a), state.at(x, b));
            let merged = match linkage {
                Linkage::Single => dxa.min(dxb),
                Linkage::Complete => dxa.max(dxb),
                Linkage::Average => (na * dxa + nb * dxb) / (na + nb),
                Linkage::Ward => {
                    let nx = state.sizes[x] as f64;
                    ((na + nx) * dxa + (nb + nx) * dxb - nx * dab) / (na + nb + nx)
                }
            };
            state.set(x, a, merged);
        }
        state.live[b] = false;
        state.sizes[a] += state.sizes[b];
        state.ids[a] = n + step;

        if step + 2 == n {
            break;
        }
        state.rescan(a);
        for x in 0..n {
            if x == a || !state.live[x] {
                continue;
            }
            let cached = state.nn[x];
            if cached == a || cached == b {
                state.rescan(x);
            } else if state.less((x, a), (x, cached)) {
                state.nn[x] = a;
            }
        }
    }
    MergeTree { n, merges }
}

/// Partition obtained by undoing the last `k - 1` merges.
pub fn cut_tree(t: &MergeTree, k: usize) -> Result<Partition> {
    let n = t.n;
    if k < 2 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    let mut parent: Vec<usize> = (0..2 * n - 1).collect();
    for (step, m) in t.merges.iter().take(n - k).enumerate() {
        parent[m.left] = n + step;
        parent[m.right] = n + step;
    }
    let root = |mut x: usize| {
        while parent[x] != x {
            x = parent[x];
        }
        x
    };
    let roots: Vec<usize> = (0..n).map(root).collect();
    Partition::from_raw(&roots)
}
