//! Finite ultrametric spaces, the hedgehog metric, and the ball-tree order.

mod io;

use std::collections::HashSet;

use num_rational::Rational64;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

pub use io::{read_csv, read_json, to_json};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UltraError {
    #[error("space has no points")]
    Empty,
    #[error("distance matrix is not square: {0}")]
    NotSquare(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("d({0},{1}) != d({1},{0})")]
    Asymmetric(String, String),
    #[error("negative distance d({0},{1})")]
    Negative(String, String),
    #[error("nonzero diagonal entry at {0}")]
    NonzeroDiagonal(String),
    #[error("distinct points at distance zero: {0:?}")]
    ZeroOffDiagonal(Vec<(String, String)>),
    #[error("strong triangle inequality fails for {} triple(s), first {:?}", .0.len(), .0[0])]
    TriangleViolation(Vec<(String, String, String)>),
    #[error("basepoint {0} not found in spine {1}")]
    BasepointNotFound(String, usize),
    #[error("block {block:?} of level {level} is not an interval of the order")]
    NotInterval { level: usize, block: Vec<String> },
    #[error("parse error: {0}")]
    Parse(String),
}

/// A validated finite ultrametric space. Points are kept in input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteUltra {
    labels: Vec<String>,
    dist: Vec<Vec<Rational64>>,
    /// `rank[x][y] = i` when `d(x,y)` is the `i`-th largest distinct distance (1-based);
    /// `u32::MAX` on the diagonal.
    rank: Vec<Vec<u32>>,
    levels: usize,
}

impl FiniteUltra {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn d(&self, x: usize, y: usize) -> Rational64 {
        self.dist[x][y]
    }

    pub fn matrix(&self) -> &[Vec<Rational64>] {
        &self.dist
    }

    /// Number of distinct nonzero distances.
    pub fn distinct_distances(&self) -> usize {
        self.levels
    }

    /// `d(x,y) < 2^-n` after quantizing the distinct distances to `1/2, 1/4, ...`.
    fn close_at(&self, x: usize, y: usize, n: usize) -> bool {
        self.rank[x][y] as usize > n
    }
}

pub fn validate_ultra(labels: Vec<String>, dist: Vec<Vec<Rational64>>) -> Result<FiniteUltra, UltraError> {
    let n = labels.len();
    if n == 0 {
        return Err(UltraError::Empty);
    }
    if dist.len() != n || dist.iter().any(|r| r.len() != n) {
        return Err(UltraError::NotSquare(format!("{n} labels, {} rows", dist.len())));
    }
    let mut seen = HashSet::new();
    for l in &labels {
        if !seen.insert(l) {
            return Err(UltraError::DuplicateLabel(l.clone()));
        }
    }
    let mut zeros = Vec::new();
    for x in 0..n {
        if !dist[x][x].is_zero() {
            return Err(UltraError::NonzeroDiagonal(labels[x].clone()));
        }
        for y in x + 1..n {
            if dist[x][y] != dist[y][x] {
                return Err(UltraError::Asymmetric(labels[x].clone(), labels[y].clone()));
            }
            if dist[x][y] < Rational64::zero() {
                return Err(UltraError::Negative(labels[x].clone(), labels[y].clone()));
            }
            if dist[x][y].is_zero() {
                zeros.push((labels[x].clone(), labels[y].clone()));
            }
        }
    }
    if !zeros.is_empty() {
        return Err(UltraError::ZeroOffDiagonal(zeros));
    }
    let mut values: Vec<Rational64> = dist.iter().flatten().filter(|d| !d.is_zero()).copied().collect();
    values.sort_by(|a, b| b.cmp(a));
    values.dedup();
    let rank: Vec<Vec<u32>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    if x == y {
                        u32::MAX
                    } else {
                        values.binary_search_by(|v| dist[x][y].cmp(v)).unwrap() as u32 + 1
                    }
                })
                .collect()
        })
        .collect();
    // d(x,z) <= max(d(x,y), d(y,z)) reads rank(x,z) >= min(rank(x,y), rank(y,z))
    let mut bad = Vec::new();
    for x in 0..n {
        for z in x + 1..n {
            for y in 0..n {
                if y != x && y != z && rank[x][z] < rank[x][y].min(rank[y][z]) {
                    bad.push((labels[x].clone(), labels[y].clone(), labels[z].clone()));
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(UltraError::TriangleViolation(bad));
    }
    Ok(FiniteUltra { labels, dist, rank, levels: values.len() })
}

/// A partition of the point set, blocks listed by least member.
pub type Partition = Vec<Vec<usize>>;

/// The nested partitions `P_1, ..., P_N` into balls; `P_N` is the first all-singleton level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallTree {
    pub levels: Vec<Partition>,
}

impl BallTree {
    /// Index of the block of `P_n` (1-based `n`) holding `x`.
    pub fn block_of(&self, n: usize, x: usize) -> usize {
        self.levels[n - 1].iter().position(|b| b.contains(&x)).expect("partition covers the space")
    }
}

pub fn ball_tree(m: &FiniteUltra) -> BallTree {
    let top = m.levels.max(1);
    let levels = (1..=top)
        .map(|n| {
            let mut placed = vec![false; m.len()];
            let mut blocks = Vec::new();
            for x in 0..m.len() {
                if placed[x] {
                    continue;
                }
                let block: Vec<usize> = (0..m.len()).filter(|&y| y == x || m.close_at(x, y, n)).collect();
                for &y in &block {
                    placed[y] = true;
                }
                blocks.push(block);
            }
            blocks
        })
        .collect();
    BallTree { levels }
}

/// A DE-ordering of a finite family: the input order.
pub fn de_order<T: Clone>(blocks: &[T]) -> Result<Vec<T>, UltraError> {
    if blocks.is_empty() {
        return Err(UltraError::Empty);
    }
    Ok(blocks.to_vec())
}

/// The level at which the order of two points was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub lo: usize,
    pub hi: usize,
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrderResult {
    /// Point indices, least first.
    pub order: Vec<usize>,
    /// `level_orders[n-1]` lists the blocks of `P_n` in `<_n` order.
    pub level_orders: Vec<Partition>,
    pub provenance: Vec<Decision>,
    position: Vec<usize>,
}

impl LinearOrderResult {
    pub fn precedes(&self, x: usize, y: usize) -> bool {
        self.position[x] < self.position[y]
    }

    pub fn position(&self, x: usize) -> usize {
        self.position[x]
    }
}

pub fn prop1_order(m: &FiniteUltra) -> LinearOrderResult {
    let tree = ball_tree(m);
    let mut level_orders: Vec<Partition> = Vec::with_capacity(tree.levels.len());
    level_orders.push(de_order(&tree.levels[0]).expect("nonempty space"));
    for n in 1..tree.levels.len() {
        let mut next = Vec::new();
        for parent in &level_orders[n - 1] {
            let children: Partition =
                tree.levels[n].iter().filter(|b| parent.contains(&b[0])).cloned().collect();
            next.extend(de_order(&children).expect("a ball contains a ball of the next level"));
        }
        level_orders.push(next);
    }
    let order: Vec<usize> = level_orders.last().unwrap().iter().map(|b| b[0]).collect();
    let mut position = vec![0; m.len()];
    for (i, &x) in order.iter().enumerate() {
        position[x] = i;
    }
    let mut provenance = Vec::new();
    for (i, &x) in order.iter().enumerate() {
        for &y in &order[i + 1..] {
            let level = (1..=tree.levels.len()).find(|&n| !m.close_at(x, y, n)).expect("finest level separates");
            provenance.push(Decision { lo: x, hi: y, level });
        }
    }
    LinearOrderResult { order, level_orders, provenance, position }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockSpan {
    pub level: usize,
    pub members: Vec<String>,
    pub first: String,
    pub last: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalReport {
    pub order: Vec<String>,
    pub blocks: Vec<BlockSpan>,
}

/// Checks that every ball of every level is contiguous in the order.
pub fn verify_interval_property(m: &FiniteUltra, r: &LinearOrderResult) -> Result<IntervalReport, UltraError> {
    let tree = ball_tree(m);
    let mut blocks = Vec::new();
    for (i, level) in tree.levels.iter().enumerate() {
        for b in level {
            let pos: Vec<usize> = b.iter().map(|&x| r.position(x)).collect();
            let (lo, hi) = (*pos.iter().min().unwrap(), *pos.iter().max().unwrap());
            let members: Vec<String> = b.iter().map(|&x| m.labels[x].clone()).collect();
            if hi - lo + 1 != b.len() {
                return Err(UltraError::NotInterval { level: i + 1, block: members });
            }
            blocks.push(BlockSpan {
                level: i + 1,
                members,
                first: m.labels[r.order[lo]].clone(),
                last: m.labels[r.order[hi]].clone(),
            });
        }
    }
    Ok(IntervalReport { order: r.order.iter().map(|&x| m.labels[x].clone()).collect(), blocks })
}

/// Label of the point `x` of spine `i` (1-based) in a hedgehog.
pub fn spine_label(i: usize, x: &str) -> String {
    format!("{i}:{x}")
}

/// The hedgehog of pointed spaces: the basepoints glued into `o`, a point of
/// spine `i` at distance `d_i(b_i, x)` from `o`, and points on different spines
/// at the larger of their two distances to `o`.
pub fn hedgehog_metric(spines: &[(FiniteUltra, String)]) -> Result<FiniteUltra, UltraError> {
    let mut labels = vec!["o".to_string()];
    // (spine, point, distance to o)
    let mut pts: Vec<(usize, usize, Rational64)> = Vec::new();
    for (i, (x, base)) in spines.iter().enumerate() {
        let b = x.index_of(base).ok_or_else(|| UltraError::BasepointNotFound(base.clone(), i + 1))?;
        for p in (0..x.len()).filter(|&p| p != b) {
            labels.push(spine_label(i + 1, x.label(p)));
            pts.push((i, p, x.d(b, p)));
        }
    }
    let n = labels.len();
    let mut dist = vec![vec![Rational64::zero(); n]; n];
    for (u, (i, p, dp)) in pts.iter().enumerate() {
        dist[0][u + 1] = *dp;
        dist[u + 1][0] = *dp;
        for (v, (j, q, dq)) in pts.iter().enumerate().skip(u + 1) {
            let d = if i == j { spines[*i].0.d(*p, *q) } else { (*dp).max(*dq) };
            dist[u + 1][v + 1] = d;
            dist[v + 1][u + 1] = d;
        }
    }
    validate_ultra(labels, dist)
}

/// Whether spine `i` (1-based) sits isometrically inside the hedgehog `h`, with `b_i` at `o`.
pub fn spine_isometry(h: &FiniteUltra, spine: &FiniteUltra, base: &str, i: usize) -> bool {
    let place = |x: usize| -> Option<usize> {
        if spine.label(x) == base {
            h.index_of("o")
        } else {
            h.index_of(&spine_label(i, spine.label(x)))
        }
    };
    (0..spine.len()).all(|x| {
        (0..spine.len()).all(|y| match (place(x), place(y)) {
            (Some(a), Some(b)) => h.d(a, b) == spine.d(x, y),
            _ => false,
        })
    })
}

/// A random ultrametric on `n` points labelled `p0, p1, ...`, built from a random
/// hierarchy of nested clusters with strictly shrinking diameters.
pub fn random_ultra<R: Rng>(rng: &mut R, n: usize) -> FiniteUltra {
    assert!(n > 0);
    let mut dist = vec![vec![Rational64::zero(); n]; n];
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    split(rng, &pts, 1, &mut dist);
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    validate_ultra(labels, dist).expect("cluster hierarchies are ultrametric")
}

fn split<R: Rng>(rng: &mut R, pts: &[usize], depth: i64, dist: &mut [Vec<Rational64>]) {
    if pts.len() < 2 {
        return;
    }
    let k = rng.gen_range(2..=pts.len().min(4));
    let mut groups: Vec<Vec<usize>> = pts[..k].iter().map(|&p| vec![p]).collect();
    for &p in &pts[k..] {
        groups[rng.gen_range(0..k)].push(p);
    }
    // 2/(2D + s) strictly decreases as D grows by at least one
    let d = Rational64::new(2, 2 * depth + rng.gen_range(0..=1));
    for (a, g) in groups.iter().enumerate() {
        for h in &groups[a + 1..] {
            for &x in g {
                for &y in h {
                    dist[x][y] = d;
                    dist[y][x] = d;
                }
            }
        }
    }
    for g in &groups {
        let next = depth + rng.gen_range(1..=3);
        split(rng, g, next, dist);
    }
}

/// Random pointed spines whose hedgehog has at most `max_points` points.
pub fn random_spines<R: Rng>(rng: &mut R, max_points: usize) -> Vec<(FiniteUltra, String)> {
    assert!(max_points >= 2);
    let mut budget = max_points - 1;
    let count = rng.gen_range(1..=5);
    let mut out = Vec::new();
    for _ in 0..count {
        if budget == 0 {
            break;
        }
        let extra = rng.gen_range(1..=budget.min(60));
        budget -= extra;
        let x = random_ultra(rng, extra + 1);
        let base = x.label(rng.gen_range(0..x.len())).to_string();
        out.push((x, base));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    fn space(labels: &[&str], rows: Vec<Vec<Rational64>>) -> Result<FiniteUltra, UltraError> {
        validate_ultra(labels.iter().map(|s| s.to_string()).collect(), rows)
    }

    fn three() -> FiniteUltra {
        let z = r(0, 1);
        space(&["a", "b", "c"], vec![vec![z, r(1, 4), r(1, 2)], vec![r(1, 4), z, r(1, 2)], vec![r(1, 2), r(1, 2), z]])
            .unwrap()
    }

    fn names(m: &FiniteUltra, p: &Partition) -> Vec<Vec<String>> {
        p.iter().map(|b| b.iter().map(|&x| m.label(x).to_string()).collect()).collect()
    }

    #[test]
    fn validation() {
        let z = r(0, 1);
        let bad = space(&["a", "b", "c"], vec![vec![z, r(1, 1), r(1, 4)], vec![r(1, 1), z, r(1, 4)], vec![r(1, 4), r(1, 4), z]]);
        match bad {
            Err(UltraError::TriangleViolation(v)) => assert_eq!(v, vec![("a".into(), "c".into(), "b".into())]),
            other => panic!("{other:?}"),
        }
        assert!(space(&["x"], vec![vec![z]]).is_ok());
        assert!(matches!(space(&["x", "y"], vec![vec![z, z], vec![z, z]]), Err(UltraError::ZeroOffDiagonal(_))));
        assert!(matches!(space(&["x", "y"], vec![vec![z, r(1, 2)], vec![r(1, 3), z]]), Err(UltraError::Asymmetric(..))));
    }

    #[test]
    fn balls_and_order() {
        let m = three();
        let t = ball_tree(&m);
        assert_eq!(t.levels.len(), 2);
        assert_eq!(names(&m, &t.levels[0]), vec![vec!["a", "b"], vec!["c"]]);
        assert_eq!(names(&m, &t.levels[1]), vec![vec!["a"], vec!["b"], vec!["c"]]);
        let o = prop1_order(&m);
        assert_eq!(o.order, vec![0, 1, 2]);
        assert!(verify_interval_property(&m, &o).is_ok());
        assert_eq!(o.provenance[0], Decision { lo: 0, hi: 1, level: 2 });

        let one = space(&["x"], vec![vec![r(0, 1)]]).unwrap();
        assert_eq!(ball_tree(&one).levels, vec![vec![vec![0]]]);

        let u = r(1, 1);
        let z = r(0, 1);
        let flat = space(&["a", "b", "c"], vec![vec![z, u, u], vec![u, z, u], vec![u, u, z]]).unwrap();
        assert_eq!(ball_tree(&flat).levels, vec![vec![vec![0], vec![1], vec![2]]]);
        assert_eq!(prop1_order(&flat).order, vec![0, 1, 2]);
    }

    #[test]
    fn two_level_four_points() {
        let (z, s, l) = (r(0, 1), r(1, 4), r(1, 2));
        // input order c, a, d, b with balls {a,b} and {c,d}
        let m = space(
            &["c", "a", "d", "b"],
            vec![vec![z, l, s, l], vec![l, z, l, s], vec![s, l, z, l], vec![l, s, l, z]],
        )
        .unwrap();
        let o = prop1_order(&m);
        let labels: Vec<&str> = o.order.iter().map(|&x| m.label(x)).collect();
        assert_eq!(labels, vec!["c", "d", "a", "b"]);
        let m2 = space(
            &["a", "b", "c", "d"],
            vec![vec![z, s, l, l], vec![s, z, l, l], vec![l, l, z, s], vec![l, l, s, z]],
        )
        .unwrap();
        assert_eq!(prop1_order(&m2).order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn de_orders() {
        assert_eq!(de_order(&[3, 1, 2]).unwrap(), vec![3, 1, 2]);
        assert!(de_order::<u8>(&[]).is_err());
    }

    #[test]
    fn hedgehog_distances() {
        let z = r(0, 1);
        let s1 = space(&["b", "x"], vec![vec![z, r(1, 2)], vec![r(1, 2), z]]).unwrap();
        let s2 = space(&["b", "y", "y2"], vec![vec![z, r(1, 4), r(1, 4)], vec![r(1, 4), z, r(1, 8)], vec![r(1, 4), r(1, 8), z]])
            .unwrap();
        let h = hedgehog_metric(&[(s1.clone(), "b".into()), (s2.clone(), "b".into())]).unwrap();
        let at = |l: &str| h.index_of(l).unwrap();
        assert_eq!(h.d(at("1:x"), at("2:y")), r(1, 2));
        assert_eq!(h.d(at("2:y"), at("2:y2")), r(1, 8));
        assert_eq!(h.d(at("o"), at("2:y")), r(1, 4));
        assert!(spine_isometry(&h, &s1, "b", 1));
        assert!(spine_isometry(&h, &s2, "b", 2));
        assert!(matches!(hedgehog_metric(&[(s1, "q".into())]), Err(UltraError::BasepointNotFound(..))));
    }

    #[test]
    fn random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..40 {
            let m = random_ultra(&mut rng, n);
            let o = prop1_order(&m);
            verify_interval_property(&m, &o).unwrap();
        }
    }
}
