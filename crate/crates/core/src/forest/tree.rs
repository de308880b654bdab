use rand::Rng;
use serde::{Deserialize, Serialize};

/// A node in the flat, pre-order node array. Samples with
/// `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        /// Reduction in summed squared error achieved by this split.
        gain: f64,
    },
    Leaf {
        prediction: f64,
        /// Training samples (with bootstrap multiplicity) in the leaf.
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FlatTree", into = "FlatTree")]
pub struct RegressionTree {
    nodes: Vec<Node>,
}

impl RegressionTree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn is_stump(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { prediction, .. } => return prediction,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => at = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    /// Longest root-to-leaf path, counted in edges.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Largest feature index referenced by a split.
    pub(crate) fn max_feature(&self) -> Option<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Split { feature, .. } => Some(*feature),
                Node::Leaf { .. } => None,
            })
            .max()
    }

    pub(crate) fn add_gains(&self, totals: &mut [f64]) {
        for node in &self.nodes {
            if let Node::Split { feature, gain, .. } = node {
                totals[*feature] += gain;
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn leaf(prediction: f64, count: usize) -> Self {
        RegressionTree {
            nodes: vec![Node::Leaf { prediction, count }],
        }
    }
}

pub(crate) struct TreeParams {
    pub m_try: usize,
    pub min_leaf: usize,
    pub max_depth: Option<usize>,
}

/// Grows one tree on the samples `idx` (indices into `y` and each column,
/// repeats allowed).
pub(crate) fn grow<R: Rng>(columns: &[Vec<f64>], y: &[f64], idx: &mut [usize], params: &TreeParams, rng: &mut R) -> RegressionTree {
    let mut builder = Builder {
        columns,
        y,
        params,
        nodes: Vec::new(),
        pairs: Vec::with_capacity(idx.len()),
        order: (0..columns.len()).collect(),
    };
    builder.build(idx, 0, rng);
    RegressionTree { nodes: builder.nodes }
}

struct Builder<'a> {
    columns: &'a [Vec<f64>],
    y: &'a [f64],
    params: &'a TreeParams,
    nodes: Vec<Node>,
    pairs: Vec<(f64, f64)>,
    order: Vec<usize>,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl Builder<'_> {
    fn build<R: Rng>(&mut self, idx: &mut [usize], depth: usize, rng: &mut R) -> usize {
        let n = idx.len();
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for &i in idx.iter() {
            let v = self.y[i];
            lo = lo.min(v);
            hi = hi.max(v);
            sum += v;
        }
        let id = self.nodes.len();
        if lo == hi {
            self.nodes.push(Node::Leaf {
                prediction: lo,
                count: n,
            });
            return id;
        }
        let mean = sum / n as f64;
        let leaf = Node::Leaf {
            prediction: mean.clamp(lo, hi),
            count: n,
        };
        if n < 2 * self.params.min_leaf || self.params.max_depth.is_some_and(|d| depth >= d) {
            self.nodes.push(leaf);
            return id;
        }
        let Some((best, gain)) = self.find_split(idx, mean, rng) else {
            self.nodes.push(leaf);
            return id;
        };

        let column = &self.columns[best.feature];
        let mut k = 0;
        for j in 0..n {
            if column[idx[j]] <= best.threshold {
                idx.swap(j, k);
                k += 1;
            }
        }
        self.nodes.push(leaf);
        let (left_idx, right_idx) = idx.split_at_mut(k);
        let left = self.build(left_idx, depth + 1, rng);
        let right = self.build(right_idx, depth + 1, rng);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
            gain,
        };
        id
    }

    /// Best split over a random feature subset. If none of the sampled
    /// features admits a valid split, the remaining features are tried one
    /// at a time in the same random order.
    fn find_split<R: Rng>(&mut self, idx: &[usize], mean: f64, rng: &mut R) -> Option<(Candidate, f64)> {
        let p = self.order.len();
        for i in 0..p {
            let j = rng.random_range(i..p);
            self.order.swap(i, j);
        }
        let m = self.params.m_try.min(p);
        let mut sampled = self.order[..m].to_vec();
        sampled.sort_unstable();

        let mut best: Option<Candidate> = None;
        for &f in &sampled {
            self.consider(f, idx, mean, &mut best);
        }
        if best.is_none() {
            for t in m..p {
                let f = self.order[t];
                self.consider(f, idx, mean, &mut best);
                if best.is_some() {
                    break;
                }
            }
        }
        // Centered responses sum to ~0, so the parent's score is s²/n ≈ 0.
        let total: f64 = idx.iter().map(|&i| self.y[i] - mean).sum();
        best.map(|c| {
            let gain = (c.score - total * total / idx.len() as f64).max(0.0);
            (c, gain)
        })
    }

    /// Scans all midpoints of `feature`; score is sL²/nL + sR²/nR over
    /// centered responses, which is maximal where child SSE is minimal.
    fn consider(&mut self, feature: usize, idx: &[usize], mean: f64, best: &mut Option<Candidate>) {
        let column = &self.columns[feature];
        let min_leaf = self.params.min_leaf;
        let n = idx.len();
        self.pairs.clear();
        self.pairs.extend(idx.iter().map(|&i| (column[i], self.y[i] - mean)));
        self.pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        if self.pairs[0].0 == self.pairs[n - 1].0 {
            return;
        }
        let total: f64 = self.pairs.iter().map(|p| p.1).sum();
        let mut left_sum = 0.0;
        for i in 1..n {
            left_sum += self.pairs[i - 1].1;
            if i < min_leaf || n - i < min_leaf {
                continue;
            }
            let (a, b) = (self.pairs[i - 1].0, self.pairs[i].0);
            if a == b {
                continue;
            }
            let right_sum = total - left_sum;
            let score = left_sum * left_sum / i as f64 + right_sum * right_sum / (n - i) as f64;
            let better = match best {
                None => true,
                Some(c) => score > c.score,
            };
            if better {
                let mid = a + (b - a) / 2.0;
                let threshold = if mid < b { mid } else { a };
                *best = Some(Candidate {
                    feature,
                    threshold,
                    score,
                });
            }
        }
    }
}

/// Flat, column-oriented node arrays used for serialization. Leaves carry
/// `feature = -1`, `left = right = -1`.
#[derive(Serialize, Deserialize)]
struct FlatTree {
    feature: Vec<i64>,
    threshold: Vec<f64>,
    left: Vec<i64>,
    right: Vec<i64>,
    value: Vec<f64>,
    count: Vec<usize>,
    gain: Vec<f64>,
}

impl From<RegressionTree> for FlatTree {
    fn from(tree: RegressionTree) -> Self {
        let len = tree.nodes.len();
        let mut flat = FlatTree {
            feature: Vec::with_capacity(len),
            threshold: Vec::with_capacity(len),
            left: Vec::with_capacity(len),
            right: Vec::with_capacity(len),
            value: Vec::with_capacity(len),
            count: Vec::with_capacity(len),
            gain: Vec::with_capacity(len),
        };
        for node in tree.nodes {
            let (feature, threshold, left, right, value, count, gain) = match node {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    gain,
                } => (feature as i64, threshold, left as i64, right as i64, 0.0, 0, gain),
                Node::Leaf { prediction, count } => (-1, 0.0, -1, -1, prediction, count, 0.0),
            };
            flat.feature.push(feature);
            flat.threshold.push(threshold);
            flat.left.push(left);
            flat.right.push(right);
            flat.value.push(value);
            flat.count.push(count);
            flat.gain.push(gain);
        }
        flat
    }
}

impl TryFrom<FlatTree> for RegressionTree {
    type Error = String;

    fn try_from(flat: FlatTree) -> Result<Self, String> {
        let len = flat.feature.len();
        if len == 0 {
            return Err("tree has no nodes".into());
        }
        let lens = [
            flat.threshold.len(),
            flat.left.len(),
            flat.right.len(),
            flat.value.len(),
            flat.count.len(),
            flat.gain.len(),
        ];
        if lens.iter().any(|l| *l != len) {
            return Err("tree node arrays differ in length".into());
        }
        let child = |c: i64, parent: usize| -> Result<usize, String> {
            // Pre-order layout: children always follow their parent, which
            // also rules out cycles.
            if c <= parent as i64 || c >= len as i64 {
                return Err(format!("node {parent} has invalid child {c}"));
            }
            Ok(c as usize)
        };
        let nodes = (0..len)
            .map(|i| {
                if flat.feature[i] < 0 {
                    if !flat.value[i].is_finite() {
                        return Err(format!("leaf {i} has a non-finite value"));
                    }
                    Ok(Node::Leaf {
                        prediction: flat.value[i],
                        count: flat.count[i],
                    })
                } else {
                    if !flat.threshold[i].is_finite() || !flat.gain[i].is_finite() {
                        return Err(format!("split {i} has a non-finite threshold or gain"));
                    }
                    Ok(Node::Split {
                        feature: flat.feature[i] as usize,
                        threshold: flat.threshold[i],
                        left: child(flat.left[i], i)?,
                        right: child(flat.right[i], i)?,
                        gain: flat.gain[i],
                    })
                }
            })
            .collect::<Result<Vec<_>, String>>()?;
        Ok(RegressionTree { nodes })
    }
}
