//! Point-set gadgets whose 2-transversal partitions encode whether a value
//! lies in the range of one of two injections.
//!
//! Each gadget `S_k` watches a value `k` against a pair of injections with
//! disjoint ranges. Partitioning `S_k` into two partial transversals is the
//! same as 2-coloring its conflict graph (points adjacent when they share a
//! row or column), and the construction arranges the parity of that graph so
//! that the blocks of `e1` and `e3` agree exactly when `f` hits `k` and
//! differ exactly when `g` does.
//!
//! Three shapes:
//!
//! * [`build_basic`] — three base points, plus a two-point hook placed in
//!   the column revealed by the hit; the hook's column cannot be predicted
//!   ahead of time.
//! * [`build_staircase`] — the bounded refinement: three staircase chains
//!   whose every point position is enumerable in advance, capped when a hit
//!   appears.
//! * [`build_two_regular`] — staircases truncated to a window and extended
//!   in both directions so that every interior row and column holds exactly
//!   two points.
//!
//! [`combine`] embeds many gadgets into one set via prime-power blocks,
//! [`verify_forcing`] brute-forces the parity claims, and
//! [`extract_separator`] reads a separating set off any valid partition.
//!
//! Staircase geometry is specified in figure coordinates (column, row);
//! points are stored canonically as (row, column). Constructors perform the
//! swap.

use crate::matrix::{Point, PointSet, TransversalPartition};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Largest point count the partition oracle accepts by default.
pub const DEFAULT_POINT_BUDGET: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InjectionError {
    #[error("{table} maps stages {stage_a} and {stage_b} to the same value {value}")]
    NotInjective {
        table: &'static str,
        stage_a: u64,
        stage_b: u64,
        value: u64,
    },
    #[error("value {value} lies in both ranges (f at stage {f_stage}, g at stage {g_stage})")]
    RangesOverlap {
        value: u64,
        f_stage: u64,
        g_stage: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error("point set has {points} points, above the brute-force budget {budget}")]
    BudgetExceeded { points: usize, budget: usize },
    #[error("two instances share k = {0}")]
    DuplicateK(u64),
    #[error("prime-power coordinate overflow for k = {k}, exponent {exponent}")]
    Overflow { k: u64, exponent: u64 },
    #[error("no valid 2-transversal partition exists; the construction is broken")]
    NoValidPartition,
    #[error("label {label} of gadget {k} is missing")]
    MissingLabel { k: u64, label: PointLabel },
    #[error("point ({row}, {col}) is not covered by the partition", row = .0.row, col = .0.col)]
    PointNotInPartition(Point),
}

/// Finite stage-indexed tables for two injections with disjoint ranges.
/// `f(q)` and `g(q)` become known at stage `q`; stages past the bound are
/// unrevealed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectionPair {
    f: BTreeMap<u64, u64>,
    g: BTreeMap<u64, u64>,
    stage_bound: u64,
}

/// Whether (and where) a watched value was hit during construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapEvent {
    Uncapped,
    FCapped(u64),
    GCapped(u64),
}

impl CapEvent {
    pub fn is_capped(&self) -> bool {
        !matches!(self, CapEvent::Uncapped)
    }

    /// The stage at which the cap occurred, if any.
    pub fn stage(&self) -> Option<u64> {
        match self {
            CapEvent::Uncapped => None,
            CapEvent::FCapped(q) | CapEvent::GCapped(q) => Some(*q),
        }
    }
}

impl fmt::Display for CapEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CapEvent::Uncapped => write!(f, "none"),
            CapEvent::FCapped(q) => write!(f, "f {q}"),
            CapEvent::GCapped(q) => write!(f, "g {q}"),
        }
    }
}

impl InjectionPair {
    pub fn new(
        f: BTreeMap<u64, u64>,
        g: BTreeMap<u64, u64>,
        stage_bound: u64,
    ) -> Result<Self, InjectionError> {
        for (name, table) in [("f", &f), ("g", &g)] {
            let mut by_value: BTreeMap<u64, u64> = BTreeMap::new();
            for (&stage, &value) in table {
                if let Some(&earlier) = by_value.get(&value) {
                    return Err(InjectionError::NotInjective {
                        table: name,
                        stage_a: earlier,
                        stage_b: stage,
                        value,
                    });
                }
                by_value.insert(value, stage);
            }
        }
        for (&f_stage, &value) in &f {
            if let Some((&g_stage, _)) = g.iter().find(|(_, &gv)| gv == value) {
                return Err(InjectionError::RangesOverlap {
                    value,
                    f_stage,
                    g_stage,
                });
            }
        }
        Ok(Self { f, g, stage_bound })
    }

    pub fn stage_bound(&self) -> u64 {
        self.stage_bound
    }

    pub fn f_at(&self, stage: u64) -> Option<u64> {
        self.f.get(&stage).copied()
    }

    pub fn g_at(&self, stage: u64) -> Option<u64> {
        self.g.get(&stage).copied()
    }

    /// The first stage below `horizon` at which `k` enters a range.
    pub fn cap_within(&self, k: u64, horizon: u64) -> CapEvent {
        for q in 0..horizon {
            if self.f_at(q) == Some(k) {
                return CapEvent::FCapped(q);
            }
            if self.g_at(q) == Some(k) {
                return CapEvent::GCapped(q);
            }
        }
        CapEvent::Uncapped
    }

    /// Values of `f` revealed before the stage bound.
    pub fn f_range(&self) -> BTreeSet<u64> {
        self.f
            .iter()
            .filter(|(&q, _)| q < self.stage_bound)
            .map(|(_, &v)| v)
            .collect()
    }

    pub fn g_range(&self) -> BTreeSet<u64> {
        self.g
            .iter()
            .filter(|(&q, _)| q < self.stage_bound)
            .map(|(_, &v)| v)
            .collect()
    }
}

/// Labels for gadget points.
///
/// `Base(1..=5)` are the original five points; `Chain { chain, index }` is
/// staircase point `index` on the chain rooted at `e{chain}` (negative
/// indices walk the `e1` chain's backward tail).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointLabel {
    Base(u8),
    Chain { chain: u8, index: i64 },
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointLabel::Base(n) => write!(f, "e{n}"),
            PointLabel::Chain { chain, index } => write!(f, "e{chain}_{index}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unrecognized point label {0:?}")]
pub struct LabelParseError(String);

impl FromStr for PointLabel {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .strip_prefix('e')
            .ok_or_else(|| LabelParseError(s.to_string()))?;
        match body.split_once('_') {
            None => {
                let n: u8 = body.parse().map_err(|_| LabelParseError(s.to_string()))?;
                if (1..=5).contains(&n) {
                    Ok(PointLabel::Base(n))
                } else {
                    Err(LabelParseError(s.to_string()))
                }
            }
            Some((chain, index)) => {
                let chain: u8 = chain.parse().map_err(|_| LabelParseError(s.to_string()))?;
                let index: i64 = index.parse().map_err(|_| LabelParseError(s.to_string()))?;
                if (1..=3).contains(&chain) && index != 0 {
                    Ok(PointLabel::Chain { chain, index })
                } else {
                    Err(LabelParseError(s.to_string()))
                }
            }
        }
    }
}

/// Which construction produced an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetVariant {
    Basic,
    Staircase,
    TwoRegular { window: u64 },
}

impl fmt::Display for GadgetVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetVariant::Basic => write!(f, "basic"),
            GadgetVariant::Staircase => write!(f, "staircase"),
            GadgetVariant::TwoRegular { .. } => write!(f, "two_regular"),
        }
    }
}

/// A constructed gadget: labeled points plus construction metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub k: u64,
    pub variant: GadgetVariant,
    pub stage_bound: u64,
    pub cap: CapEvent,
    pub points: PointSet,
    pub labels: BTreeMap<Point, PointLabel>,
    /// Rows with a single point (two_regular truncation ends; empty
    /// otherwise).
    pub boundary_rows: Vec<u64>,
    pub boundary_cols: Vec<u64>,
}

impl GadgetInstance {
    pub fn point_of(&self, label: PointLabel) -> Option<Point> {
        self.labels
            .iter()
            .find(|(_, &l)| l == label)
            .map(|(&p, _)| p)
    }

    /// At most two points in every row and column.
    pub fn line_bound_holds(&self) -> bool {
        self.points.row_counts().values().all(|&c| c <= 2)
            && self.points.col_counts().values().all(|&c| c <= 2)
    }

    fn from_labeled(
        k: u64,
        variant: GadgetVariant,
        stage_bound: u64,
        cap: CapEvent,
        labeled: Vec<(PointLabel, Point)>,
    ) -> Self {
        let mut points = PointSet::new();
        let mut labels = BTreeMap::new();
        for (label, point) in labeled {
            let fresh = points.insert(point);
            debug_assert!(fresh, "duplicate point {point:?}");
            labels.insert(point, label);
        }
        let boundary_rows: Vec<u64> = points
            .row_counts()
            .iter()
            .filter(|(_, &c)| c == 1)
            .map(|(&r, _)| r)
            .collect();
        let boundary_cols: Vec<u64> = points
            .col_counts()
            .iter()
            .filter(|(_, &c)| c == 1)
            .map(|(&c2, _)| c2)
            .collect();
        let instance = Self {
            k,
            variant,
            stage_bound,
            cap,
            points,
            labels,
            boundary_rows: if matches!(variant, GadgetVariant::TwoRegular { .. }) {
                boundary_rows
            } else {
                Vec::new()
            },
            boundary_cols: if matches!(variant, GadgetVariant::TwoRegular { .. }) {
                boundary_cols
            } else {
                Vec::new()
            },
        };
        debug_assert!(instance.line_bound_holds());
        instance
    }
}

/// A point in figure coordinates (x = column, y = row), possibly negative
/// during two_regular construction.
#[derive(Debug, Clone, Copy)]
struct Fig {
    x: i64,
    y: i64,
}

fn fig(x: i64, y: i64) -> Fig {
    Fig { x, y }
}

impl Fig {
    fn canonical(self) -> Point {
        debug_assert!(self.x >= 0 && self.y >= 0);
        Point::new(self.y as u64, self.x as u64)
    }
}

/// The original gadget: `e1` at (0,0), `e2` at (1,1), `e3` at (1,2) in
/// (row, column) coordinates. A hit `f(q) = k` hooks `e4` = (q+2, 0) and
/// `e5` = (q+2, 1) onto it; `g(q) = k` puts `e5` at (q+2, 2) instead.
pub fn build_basic(k: u64, pair: &InjectionPair) -> GadgetInstance {
    let mut labeled = vec![
        (PointLabel::Base(1), Point::new(0, 0)),
        (PointLabel::Base(2), Point::new(1, 1)),
        (PointLabel::Base(3), Point::new(1, 2)),
    ];
    let cap = pair.cap_within(k, pair.stage_bound());
    match cap {
        CapEvent::FCapped(q) => {
            labeled.push((PointLabel::Base(4), Point::new(q + 2, 0)));
            labeled.push((PointLabel::Base(5), Point::new(q + 2, 1)));
        }
        CapEvent::GCapped(q) => {
            labeled.push((PointLabel::Base(4), Point::new(q + 2, 0)));
            labeled.push((PointLabel::Base(5), Point::new(q + 2, 2)));
        }
        CapEvent::Uncapped => {}
    }
    GadgetInstance::from_labeled(k, GadgetVariant::Basic, pair.stage_bound(), cap, labeled)
}

/// Figure position of staircase point `e{chain}_{2q+1}` (the rightward
/// step of stage `q`).
fn odd_step(chain: u8, q: i64) -> Fig {
    match chain {
        1 => fig(3 * q + 2, 3 * q),
        2 => fig(3 * q + 3, 3 * q + 1),
        3 => fig(3 * q + 4, 3 * q + 2),
        _ => unreachable!(),
    }
}

/// Figure position of `e{chain}_{2q+2}` (the upward step of stage `q`);
/// for chain 1 the column stays and the row depends on the cap.
fn even_step(chain: u8, q: i64, cap_here: CapEvent) -> Fig {
    match chain {
        1 => {
            let y = match cap_here {
                CapEvent::Uncapped => 3 * q + 3,
                CapEvent::FCapped(_) => 3 * q + 4,
                CapEvent::GCapped(_) => 3 * q + 5,
            };
            fig(3 * q + 2, y)
        }
        2 => fig(3 * q + 3, 3 * q + 4),
        3 => fig(3 * q + 4, 3 * q + 5),
        _ => unreachable!(),
    }
}

fn chain(chain_no: u8, index: i64) -> PointLabel {
    PointLabel::Chain {
        chain: chain_no,
        index,
    }
}

/// The bounded gadget: three chains climb in lockstep, two points per chain
/// per stage, until a hit caps the `e1` chain on the row of `e2`'s chain
/// (an `f` hit) or `e3`'s chain (a `g` hit). Every candidate position is
/// computable from `k` and the stage alone.
pub fn build_staircase(k: u64, pair: &InjectionPair) -> GadgetInstance {
    let mut labeled = vec![
        (PointLabel::Base(1), fig(0, 0)),
        (PointLabel::Base(2), fig(1, 1)),
        (PointLabel::Base(3), fig(1, 2)),
    ];
    let mut cap = CapEvent::Uncapped;
    for q in 0..pair.stage_bound() {
        let qi = q as i64;
        labeled.push((chain(2, 2 * qi + 1), odd_step(2, qi)));
        labeled.push((chain(2, 2 * qi + 2), even_step(2, qi, CapEvent::Uncapped)));
        labeled.push((chain(3, 2 * qi + 1), odd_step(3, qi)));
        labeled.push((chain(3, 2 * qi + 2), even_step(3, qi, CapEvent::Uncapped)));
        labeled.push((chain(1, 2 * qi + 1), odd_step(1, qi)));
        let here = if pair.f_at(q) == Some(k) {
            CapEvent::FCapped(q)
        } else if pair.g_at(q) == Some(k) {
            CapEvent::GCapped(q)
        } else {
            CapEvent::Uncapped
        };
        labeled.push((chain(1, 2 * qi + 2), even_step(1, qi, here)));
        if here.is_capped() {
            cap = here;
            break;
        }
    }
    let labeled = labeled
        .into_iter()
        .map(|(l, f)| (l, f.canonical()))
        .collect();
    GadgetInstance::from_labeled(
        k,
        GadgetVariant::Staircase,
        pair.stage_bound(),
        cap,
        labeled,
    )
}

/// The 2-regular truncation: forward stages `0..window` (a cap freezes its
/// two chains; the remaining chain keeps climbing), one extra half-step per
/// still-open chain, and `window` backward stages plus a half-step on the
/// `e1` tail. Everything is then translated by (+3·window+3 rows,
/// +3·window columns) into ℕ×ℕ. Rows and columns at the truncation ends
/// keep one point and are reported as boundary; all others hold exactly
/// two.
pub fn build_two_regular(k: u64, pair: &InjectionPair, window: u64) -> GadgetInstance {
    let w = window as i64;
    let mut labeled = vec![
        (PointLabel::Base(1), fig(0, 0)),
        (PointLabel::Base(2), fig(1, 1)),
        (PointLabel::Base(3), fig(1, 2)),
    ];
    let cap = pair.cap_within(k, window);
    let mut open = [true; 4]; // chains indexed 1..=3
    for q in 0..window {
        let qi = q as i64;
        for c in [2u8, 3u8] {
            if open[c as usize] {
                labeled.push((chain(c, 2 * qi + 1), odd_step(c, qi)));
                labeled.push((chain(c, 2 * qi + 2), even_step(c, qi, CapEvent::Uncapped)));
            }
        }
        if open[1] {
            labeled.push((chain(1, 2 * qi + 1), odd_step(1, qi)));
            let here = match cap {
                CapEvent::FCapped(cq) if cq == q => cap,
                CapEvent::GCapped(cq) if cq == q => cap,
                _ => CapEvent::Uncapped,
            };
            labeled.push((chain(1, 2 * qi + 2), even_step(1, qi, here)));
            match here {
                CapEvent::FCapped(_) => {
                    open[1] = false;
                    open[2] = false;
                }
                CapEvent::GCapped(_) => {
                    open[1] = false;
                    open[3] = false;
                }
                CapEvent::Uncapped => {}
            }
        }
    }
    // Frontier half-steps close the head row of each chain still open.
    for c in [1u8, 2u8, 3u8] {
        if open[c as usize] {
            labeled.push((chain(c, 2 * w + 1), odd_step(c, w)));
        }
    }
    // Backward tail of the e1 chain: the mirror staircase into negative
    // coordinates, plus its own half-step.
    for i in 1..=w {
        labeled.push((chain(1, -(2 * i - 1)), fig(-3 * (i - 1), -3 * i)));
        labeled.push((chain(1, -2 * i), fig(-3 * i, -3 * i)));
    }
    labeled.push((chain(1, -(2 * w + 1)), fig(-3 * w, -3 * (w + 1))));

    let labeled = labeled
        .into_iter()
        .map(|(l, p)| {
            (
                l,
                fig(p.x + 3 * w, p.y + 3 * w + 3).canonical(),
            )
        })
        .collect();
    GadgetInstance::from_labeled(
        k,
        GadgetVariant::TwoRegular { window },
        window,
        cap,
        labeled,
    )
}

/// The `n`-th prime, 1-indexed: `nth_prime(1) = 2`.
pub fn nth_prime(n: u64) -> u64 {
    assert!(n >= 1);
    let mut count = 0;
    let mut candidate = 1u64;
    while count < n {
        candidate += 1;
        if is_prime(candidate) {
            count += 1;
        }
    }
    candidate
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `n` as `p^e` with `p` prime and `e ≥ 1`, if possible.
fn prime_power(n: u64) -> Option<(u64, u64)> {
    if n < 2 {
        return None;
    }
    let p = (2..).find(|&d| n.is_multiple_of(d)).unwrap();
    let mut rest = n;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Gadgets combined into one point set, with labels remembering which
/// instance and point each cell came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinedGadgets {
    pub points: PointSet,
    pub labels: BTreeMap<Point, (u64, PointLabel)>,
    pub caps: BTreeMap<u64, CapEvent>,
}

impl CombinedGadgets {
    pub fn window(&self) -> BTreeSet<u64> {
        self.caps.keys().copied().collect()
    }

    pub fn point_of(&self, k: u64, label: PointLabel) -> Option<Point> {
        self.labels
            .iter()
            .find(|(_, &(k2, l2))| k2 == k && l2 == label)
            .map(|(&p, _)| p)
    }
}

/// Embeds each instance into its own prime block: gadget `k` uses the
/// `(k+1)`-st prime `p`, and its point `(i, j)` lands at `(p^{i+1},
/// p^{j+1})`. Blocks built from distinct primes share no rows or columns,
/// so the combined set still has at most two points per line.
pub fn combine(instances: &[GadgetInstance]) -> Result<CombinedGadgets, GadgetError> {
    let mut points = PointSet::new();
    let mut labels = BTreeMap::new();
    let mut caps = BTreeMap::new();
    for instance in instances {
        if caps.contains_key(&instance.k) {
            return Err(GadgetError::DuplicateK(instance.k));
        }
        caps.insert(instance.k, instance.cap);
        let p = nth_prime(instance.k + 1);
        for (&point, &label) in &instance.labels {
            let row = checked_prime_power(p, point.row + 1).ok_or(GadgetError::Overflow {
                k: instance.k,
                exponent: point.row + 1,
            })?;
            let col = checked_prime_power(p, point.col + 1).ok_or(GadgetError::Overflow {
                k: instance.k,
                exponent: point.col + 1,
            })?;
            let embedded = Point::new(row, col);
            points.insert(embedded);
            labels.insert(embedded, (instance.k, label));
        }
    }
    Ok(CombinedGadgets {
        points,
        labels,
        caps,
    })
}

fn checked_prime_power(p: u64, e: u64) -> Option<u64> {
    u32::try_from(e).ok().and_then(|e| p.checked_pow(e))
}

/// Every ordered assignment of the points to two blocks such that both
/// blocks are partial transversals, in lexicographic assignment order
/// (points in canonical order, block 0 tried before block 1).
pub fn all_two_transversal_partitions(
    s: &PointSet,
    budget: usize,
) -> Result<Vec<TransversalPartition>, GadgetError> {
    if s.len() > budget {
        return Err(GadgetError::BudgetExceeded {
            points: s.len(),
            budget,
        });
    }
    let points: Vec<Point> = s.iter().copied().collect();
    let mut assignment = vec![0u8; points.len()];
    let mut rows: [BTreeSet<u64>; 2] = [BTreeSet::new(), BTreeSet::new()];
    let mut cols: [BTreeSet<u64>; 2] = [BTreeSet::new(), BTreeSet::new()];
    let mut found = Vec::new();

    fn rec(
        points: &[Point],
        i: usize,
        assignment: &mut [u8],
        rows: &mut [BTreeSet<u64>; 2],
        cols: &mut [BTreeSet<u64>; 2],
        found: &mut Vec<TransversalPartition>,
    ) {
        if i == points.len() {
            let mut blocks = vec![PointSet::new(), PointSet::new()];
            for (p, &b) in points.iter().zip(assignment.iter()) {
                blocks[b as usize].insert(*p);
            }
            found.push(TransversalPartition { blocks });
            return;
        }
        let p = points[i];
        for block in 0..2u8 {
            let b = block as usize;
            if rows[b].contains(&p.row) || cols[b].contains(&p.col) {
                continue;
            }
            rows[b].insert(p.row);
            cols[b].insert(p.col);
            assignment[i] = block;
            rec(points, i + 1, assignment, rows, cols, found);
            rows[b].remove(&p.row);
            cols[b].remove(&p.col);
        }
    }

    rec(&points, 0, &mut assignment, &mut rows, &mut cols, &mut found);
    Ok(found)
}

/// Outcome of the brute-force parity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcingRelation {
    /// `e1` and `e3` share a block in every valid partition.
    ForcedTrue,
    /// `e1` and `e3` are separated in every valid partition.
    ForcedFalse,
    /// Both placements occur.
    Unconstrained,
}

impl fmt::Display for ForcingRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForcingRelation::ForcedTrue => write!(f, "forced-true"),
            ForcingRelation::ForcedFalse => write!(f, "forced-false"),
            ForcingRelation::Unconstrained => write!(f, "unconstrained"),
        }
    }
}

/// Result of [`verify_forcing`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingReport {
    pub relation: ForcingRelation,
    pub valid_partitions: usize,
    /// Even-indexed chain points that failed to follow their base point;
    /// empty when the chain rigidity lemma holds.
    pub chain_violations: Vec<PointLabel>,
}

impl ForcingReport {
    /// The relation an instance's cap event predicts.
    pub fn expected_for(cap: CapEvent) -> ForcingRelation {
        match cap {
            CapEvent::FCapped(_) => ForcingRelation::ForcedTrue,
            CapEvent::GCapped(_) => ForcingRelation::ForcedFalse,
            CapEvent::Uncapped => ForcingRelation::Unconstrained,
        }
    }

    pub fn matches_cap(&self, cap: CapEvent) -> bool {
        self.relation == Self::expected_for(cap) && self.chain_violations.is_empty()
    }
}

/// Brute-forces every 2-transversal partition of the instance and reports
/// whether the co-block relation between `e1` and `e3` is forced, plus
/// whether every even chain point stays with its base point.
pub fn verify_forcing(
    instance: &GadgetInstance,
    budget: usize,
) -> Result<ForcingReport, GadgetError> {
    let partitions = all_two_transversal_partitions(&instance.points, budget)?;
    if partitions.is_empty() {
        return Err(GadgetError::NoValidPartition);
    }
    let locate = |label: PointLabel| {
        instance.point_of(label).ok_or(GadgetError::MissingLabel {
            k: instance.k,
            label,
        })
    };
    let e1 = locate(PointLabel::Base(1))?;
    let e3 = locate(PointLabel::Base(3))?;
    let mut seen_same = false;
    let mut seen_diff = false;
    for partition in &partitions {
        if partition.block_of(&e1) == partition.block_of(&e3) {
            seen_same = true;
        } else {
            seen_diff = true;
        }
    }
    let relation = match (seen_same, seen_diff) {
        (true, false) => ForcingRelation::ForcedTrue,
        (false, true) => ForcingRelation::ForcedFalse,
        (true, true) => ForcingRelation::Unconstrained,
        (false, false) => unreachable!("partitions is nonempty"),
    };

    let mut chain_violations = Vec::new();
    for (&point, &label) in &instance.labels {
        if let PointLabel::Chain { chain, index } = label {
            if index % 2 != 0 {
                continue;
            }
            let base = locate(PointLabel::Base(chain))?;
            let follows = partitions
                .iter()
                .all(|p| p.block_of(&base) == p.block_of(&point));
            if !follows {
                chain_violations.push(label);
            }
        }
    }

    Ok(ForcingReport {
        relation,
        valid_partitions: partitions.len(),
        chain_violations,
    })
}

/// A separating-set candidate read off one partition of a combined set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatorReport {
    /// Values whose `e1` and `e3` share a block.
    pub a: BTreeSet<u64>,
    /// All values the combined set watches.
    pub window: BTreeSet<u64>,
}

impl SeparatorReport {
    /// `A` contains every f-hit in the window and excludes every g-hit.
    pub fn separates(&self, caps: &BTreeMap<u64, CapEvent>) -> bool {
        caps.iter().all(|(k, cap)| match cap {
            CapEvent::FCapped(_) => self.a.contains(k),
            CapEvent::GCapped(_) => !self.a.contains(k),
            CapEvent::Uncapped => true,
        })
    }
}

/// Reads the separating set off a valid partition of a combined gadget set:
/// `A` collects the `k` whose `e1` and `e3` points share a block.
pub fn extract_separator(
    partition: &TransversalPartition,
    combined: &CombinedGadgets,
) -> Result<SeparatorReport, GadgetError> {
    let mut a = BTreeSet::new();
    for &k in combined.caps.keys() {
        let block_of = |label: PointLabel| -> Result<usize, GadgetError> {
            let point = combined
                .point_of(k, label)
                .ok_or(GadgetError::MissingLabel { k, label })?;
            partition
                .block_of(&point)
                .ok_or(GadgetError::PointNotInPartition(point))
        };
        if block_of(PointLabel::Base(1))? == block_of(PointLabel::Base(3))? {
            a.insert(k);
        }
    }
    Ok(SeparatorReport {
        a,
        window: combined.window(),
    })
}

/// Candidate positions a gadget could ever place in a row, computable from
/// the construction alone — the boundedness witness. The returned list is a
/// finite superset of the actual points in that row.
pub fn row_candidates(variant: GadgetVariant, row: u64) -> Vec<Point> {
    // staircase rows grow with the stage; anything past i64 is unoccupied
    let Ok(signed_row) = i64::try_from(row) else {
        return Vec::new();
    };
    match variant {
        GadgetVariant::Basic => basic_row_candidates(row),
        GadgetVariant::Staircase => staircase_row_candidates(signed_row),
        GadgetVariant::TwoRegular { window } => {
            let w = window as i64;
            let r0 = signed_row - (3 * w + 3);
            let mut out: Vec<Point> = staircase_row_candidates(r0)
                .into_iter()
                .map(|p| Point::new(row, p.col + 3 * window))
                .collect();
            // frontier half-steps share the stage formulas; backward rows
            // are the translated -3i lines
            if r0 < 0 && r0 % 3 == 0 {
                let i = -r0 / 3;
                for x in [-3 * (i - 1), -3 * i] {
                    let col = x + 3 * w;
                    if col >= 0 {
                        out.push(Point::new(row, col as u64));
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        }
    }
}

fn basic_row_candidates(row: u64) -> Vec<Point> {
    match row {
        0 => vec![Point::new(0, 0)],
        1 => vec![Point::new(1, 1), Point::new(1, 2)],
        r => vec![Point::new(r, 0), Point::new(r, 1), Point::new(r, 2)],
    }
}

/// Raw staircase candidates for a (possibly untranslated) row index.
fn staircase_row_candidates(row: i64) -> Vec<Point> {
    let mut out = Vec::new();
    if row < 0 {
        return out;
    }
    let mut push = |f: Fig| {
        if f.y == row && f.x >= 0 {
            out.push(f.canonical());
        }
    };
    match row {
        0 => push(fig(0, 0)),
        1 => push(fig(1, 1)),
        2 => push(fig(1, 2)),
        _ => {}
    }
    // every chain point's row determines its stage
    for chain_no in [1u8, 2, 3] {
        let base_row = i64::from(chain_no) - 1;
        if (row - base_row) % 3 == 0 {
            push(odd_step(chain_no, (row - base_row) / 3));
        }
    }
    for (chain_no, offset) in [(2u8, 4i64), (3, 5)] {
        if (row - offset) % 3 == 0 {
            push(even_step(chain_no, (row - offset) / 3, CapEvent::Uncapped));
        }
    }
    // chain 1's even point has three possible rows
    for (cap, offset) in [
        (CapEvent::Uncapped, 3i64),
        (CapEvent::FCapped(0), 4),
        (CapEvent::GCapped(0), 5),
    ] {
        if (row - offset) % 3 == 0 {
            let q = (row - offset) / 3;
            let template = match cap {
                CapEvent::Uncapped => CapEvent::Uncapped,
                CapEvent::FCapped(_) => CapEvent::FCapped(q as u64),
                CapEvent::GCapped(_) => CapEvent::GCapped(q as u64),
            };
            push(even_step(1, q, template));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Candidates for a row of a combined set: factor the row as a prime power
/// to find which gadget owns it, then map that gadget's candidates through
/// its prime block.
pub fn combined_row_candidates(
    row: u64,
    variants: &BTreeMap<u64, GadgetVariant>,
) -> Vec<Point> {
    let Some((p, e)) = prime_power(row) else {
        return Vec::new();
    };
    let Some((_, &variant)) = variants
        .iter()
        .find(|(&k, _)| nth_prime(k + 1) == p)
    else {
        return Vec::new();
    };
    row_candidates(variant, e - 1)
        .into_iter()
        .filter_map(|point| {
            checked_prime_power(p, point.col + 1).map(|col| Point::new(row, col))
        })
        .collect()
}
