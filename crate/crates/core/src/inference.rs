//! Reverse engineering of polynomial models from time series.
//!
//! A time series is a list of experiments; each experiment is a sequence of
//! states `p_0, ..., p_r`, and every consecutive pair `p_j -> p_{j+1}` is a
//! transition the model must reproduce.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{FiniteDynamicalSystem, State};
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::groebner::{format_point, ideal_of_points, PointSet};
use crate::poly::{OrderKind, Polynomial, TermOrder};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeSeries {
    field: Field,
    nvars: usize,
    segments: Vec<Vec<State>>,
}

impl TimeSeries {
    pub fn new(field: Field, nvars: usize, segments: Vec<Vec<State>>) -> Result<TimeSeries> {
        if segments.is_empty() {
            return Err(Error::EmptyData);
        }
        for (s, seg) in segments.iter().enumerate() {
            if seg.len() < 2 {
                return Err(Error::Invalid(format!(
                    "segment {} has {} time point(s); at least 2 are needed",
                    s + 1,
                    seg.len()
                )));
            }
            for p in seg {
                if p.len() != nvars {
                    return Err(Error::ArityError {
                        expected: nvars,
                        found: p.len(),
                    });
                }
                if let Some(&bad) = p.iter().find(|&&x| !field.contains(x)) {
                    return Err(Error::Invalid(format!("{bad} is not an element of {field}")));
                }
            }
        }
        Ok(TimeSeries {
            field,
            nvars,
            segments,
        })
    }

    /// Data consisting of the full transition table of `fds`, one
    /// two-point segment per state.
    pub fn from_transition_table(fds: &FiniteDynamicalSystem, bound: u64) -> Result<TimeSeries> {
        let succ = fds.successor_table(bound)?;
        let segments = succ
            .iter()
            .enumerate()
            .map(|(v, &w)| vec![fds.decode(v as u64), fds.decode(w)])
            .collect();
        TimeSeries::new(fds.field(), fds.nvars(), segments)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn segments(&self) -> &[Vec<State>] {
        &self.segments
    }

    /// All `(p_j, p_{j+1})` pairs, segment by segment.
    pub fn transitions(&self) -> impl Iterator<Item = (&State, &State)> {
        self.segments
            .iter()
            .flat_map(|seg| seg.windows(2).map(|w| (&w[0], &w[1])))
    }

    /// Distinct input states in first-occurrence order with their successor;
    /// conflicting successors are an error.
    pub fn deterministic_pairs(&self) -> Result<Vec<(State, State)>> {
        let mut seen: BTreeMap<&State, &State> = BTreeMap::new();
        let mut out = Vec::new();
        for (p, w) in self.transitions() {
            match seen.get(p) {
                Some(&prev) if prev != w => {
                    let k = self.field;
                    return Err(Error::InconsistentData(format!(
                        "state ({}) is followed by both ({}) and ({})",
                        format_point(k, p),
                        format_point(k, prev),
                        format_point(k, w)
                    )));
                }
                Some(_) => {}
                None => {
                    seen.insert(p, w);
                    out.push((p.clone(), w.clone()));
                }
            }
        }
        Ok(out)
    }

    /// CSV with header `x1,...,xn`, one state per row, a blank line between
    /// segments.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let header: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        writeln!(s, "{}", header.join(",")).expect("write to String");
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            for p in seg {
                let row: Vec<String> = p.iter().map(|&x| self.field.format(x)).collect();
                writeln!(s, "{}", row.join(",")).expect("write to String");
            }
        }
        s
    }

    pub fn from_csv(text: &str, field: Field) -> Result<TimeSeries> {
        let (nvars, segments) = parse_csv(text, |cell, line, col| {
            field
                .parse_literal(cell)
                .map_err(|e| Error::parse(line, col, e.to_string()))
        })?;
        TimeSeries::new(field, nvars, segments)
    }
}

/// Parse the shared CSV layout; `cell` converts one trimmed entry.
fn parse_csv<T>(
    text: &str,
    cell: impl Fn(&str, usize, usize) -> Result<T>,
) -> Result<(usize, Vec<Vec<Vec<T>>>)> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(Error::EmptyData)?;
    let mut col = 1;
    let names: Vec<&str> = header.split(',').collect();
    for (i, name) in names.iter().enumerate() {
        let expected = format!("x{}", i + 1);
        if name.trim() != expected {
            return Err(Error::parse(
                hline,
                col,
                format!("expected header column {expected}, found {:?}", name.trim()),
            ));
        }
        col += name.len() + 1;
    }
    let nvars = names.len();
    let mut segments: Vec<Vec<Vec<T>>> = Vec::new();
    let mut current: Vec<Vec<T>> = Vec::new();
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            if !current.is_empty() {
                segments.push(std::mem::take(&mut current));
            }
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != nvars {
            return Err(Error::parse(
                lineno,
                1,
                format!("expected {nvars} values, found {}", cells.len()),
            ));
        }
        let mut row = Vec::with_capacity(nvars);
        let mut col = 1;
        for c in cells {
            let lead = c.len() - c.trim_start().len();
            row.push(cell(c.trim(), lineno, col + lead)?);
            col += c.len() + 1;
        }
        current.push(row);
    }
    if !current.is_empty() {
        segments.push(current);
    }
    if segments.is_empty() {
        return Err(Error::EmptyData);
    }
    Ok((nvars, segments))
}

/// Parse real-valued measurements in the same CSV layout.
pub fn parse_real_csv(text: &str) -> Result<Vec<Vec<Vec<f64>>>> {
    let (_, segments) = parse_csv(text, |cell, line, col| {
        cell.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| Error::parse(line, col, format!("expected a finite number, found {cell:?}")))
    })?;
    Ok(segments)
}

/// Quantile discretization into `q` levels, column by column over all
/// segments: a value whose rank (number of strictly smaller values in its
/// column) is `r` out of `m` gets level `floor(q r / m)`.
pub fn discretize(segments: &[Vec<Vec<f64>>], field: Field) -> Result<TimeSeries> {
    let rows: Vec<&Vec<f64>> = segments.iter().flatten().collect();
    let Some(first) = rows.first() else {
        return Err(Error::EmptyData);
    };
    let n = first.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::ArityError {
            expected: n,
            found: bad.len(),
        });
    }
    if rows.iter().flat_map(|r| r.iter()).any(|x| !x.is_finite()) {
        return Err(Error::Invalid("measurements must be finite numbers".into()));
    }
    let m = rows.len() as u64;
    let q = field.order() as u64;
    let mut levels: Vec<Vec<Elem>> = vec![vec![0; n]; rows.len()];
    for j in 0..n {
        let mut sorted: Vec<f64> = rows.iter().map(|r| r[j]).collect();
        sorted.sort_by(f64::total_cmp);
        for (i, r) in rows.iter().enumerate() {
            let rank = sorted.partition_point(|&v| v < r[j]) as u64;
            levels[i][j] = (q * rank / m) as Elem;
        }
    }
    let mut it = levels.into_iter();
    let out = segments
        .iter()
        .map(|seg| it.by_ref().take(seg.len()).collect())
        .collect();
    TimeSeries::new(field, n, out)
}

/// How one coordinate of an inferred model was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateProvenance {
    /// The interpolating polynomial before reduction.
    pub interpolant: Polynomial,
    pub order: TermOrder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferredModel {
    pub system: FiniteDynamicalSystem,
    pub provenance: Vec<CoordinateProvenance>,
    /// Number of distinct input states in the data.
    pub num_points: usize,
}

impl InferredModel {
    /// Whether the model reproduces every transition of `ts`.
    pub fn fits(&self, ts: &TimeSeries) -> bool {
        ts.transitions()
            .all(|(p, w)| self.system.step(p).is_ok_and(|v| &v == w))
    }
}

/// Interpolate every coordinate through the data and reduce it to normal
/// form modulo the ideal of the input states under `order`.
pub fn infer_ls(ts: &TimeSeries, order: &TermOrder) -> Result<InferredModel> {
    order.check_arity(ts.nvars)?;
    let pairs = ts.deterministic_pairs()?;
    let k = ts.field;
    let n = ts.nvars;
    let points = PointSet::new(k, n, pairs.iter().map(|(p, _)| p.clone()).collect())?;
    let ideal = ideal_of_points(&points, order)?;
    let mut coords = Vec::with_capacity(n);
    let mut provenance = Vec::with_capacity(n);
    for i in 0..n {
        let values: Vec<Elem> = pairs.iter().map(|(_, w)| w[i]).collect();
        let interpolant = ideal.interpolate(&values)?;
        coords.push(ideal.normal_form(&interpolant)?);
        provenance.push(CoordinateProvenance {
            interpolant,
            order: order.clone(),
        });
    }
    Ok(InferredModel {
        system: FiniteDynamicalSystem::new(coords)?,
        provenance,
        num_points: pairs.len(),
    })
}

/// Score attached to each minimal prime before normalisation.
pub trait PrimeScore: Sync {
    fn score(&self, prime: &[usize]) -> f64;
}

/// Default score `1/|P|` (empty primes score 1).
#[derive(Clone, Copy, Debug, Default)]
pub struct InverseSize;

impl PrimeScore for InverseSize {
    fn score(&self, prime: &[usize]) -> f64 {
        1.0 / prime.len().max(1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinSetsResult {
    /// 0-based coordinate index.
    pub coordinate: usize,
    pub nvars: usize,
    /// Supports of a minimal generating set of the difference ideal, sorted.
    pub generators: Vec<Vec<usize>>,
    /// Minimal primes as sorted variable sets, ordered by size then lexicographically.
    pub primes: Vec<Vec<usize>>,
    /// Normalised score per prime, parallel to `primes`.
    pub scores: Vec<f64>,
}

/// Minimal wiring diagrams for coordinate `i` under the default score.
pub fn min_sets(ts: &TimeSeries, i: usize) -> Result<MinSetsResult> {
    min_sets_with(ts, i, &InverseSize)
}

pub fn min_sets_with(ts: &TimeSeries, i: usize, score: &dyn PrimeScore) -> Result<MinSetsResult> {
    let n = ts.nvars;
    if i >= n {
        return Err(Error::Invalid(format!("coordinate {} out of range 1..={n}", i + 1)));
    }
    if n > 64 {
        return Err(Error::Invalid("at most 64 variables are supported".into()));
    }
    let pairs = ts.deterministic_pairs()?;
    let mut masks: Vec<u64> = Vec::new();
    for (a, (p, w)) in pairs.iter().enumerate() {
        for (q, v) in &pairs[a + 1..] {
            if w[i] != v[i] {
                let m = (0..n).filter(|&j| p[j] != q[j]).fold(0u64, |m, j| m | 1 << j);
                masks.push(m);
            }
        }
    }
    let gens = minimal_generators(masks);
    let mut primes: Vec<Vec<usize>> = minimal_hitting_sets(&gens)
        .into_iter()
        .map(bits)
        .collect();
    primes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let raw: Vec<f64> = primes.iter().map(|p| score.score(p)).collect();
    let total: f64 = raw.iter().sum();
    let scores = raw.iter().map(|s| s / total).collect();
    let mut generators: Vec<Vec<usize>> = gens.into_iter().map(bits).collect();
    generators.sort();
    Ok(MinSetsResult {
        coordinate: i,
        nvars: n,
        generators,
        primes,
        scores,
    })
}

fn bits(m: u64) -> Vec<usize> {
    (0..64).filter(|&j| m >> j & 1 == 1).collect()
}

/// Drop duplicates and supersets; the hitting sets are unchanged.
fn minimal_generators(mut masks: Vec<u64>) -> Vec<u64> {
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks.dedup();
    let mut out: Vec<u64> = Vec::new();
    for m in masks {
        if out.iter().all(|&g| g & m != g) {
            out.push(m);
        }
    }
    out
}

/// All inclusion-minimal sets meeting every generator.
///
/// Branches on the elements of the smallest unhit generator, forbidding
/// elements already tried at that level so each set is reached once, and
/// prunes as soon as a chosen element has no private generator left.
/// With no generators the only minimal hitting set is empty.
pub fn minimal_hitting_sets(gens: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    branch(gens, 0, 0, &mut out);
    out.sort_unstable();
    out
}

fn branch(gens: &[u64], chosen: u64, forbidden: u64, out: &mut Vec<u64>) {
    // Every chosen element needs a generator hit by it alone.
    let mut c = chosen;
    while c != 0 {
        let v = c & c.wrapping_neg();
        c ^= v;
        if !gens.iter().any(|&g| g & chosen == v) {
            return;
        }
    }
    let unhit = gens
        .iter()
        .filter(|&&g| g & chosen == 0)
        .map(|&g| g & !forbidden)
        .min_by_key(|g| g.count_ones());
    match unhit {
        None => out.push(chosen),
        Some(0) => {}
        Some(g) => {
            let mut rest = g;
            let mut forbid = forbidden;
            while rest != 0 {
                let v = rest & rest.wrapping_neg();
                rest ^= v;
                branch(gens, chosen | v, forbid, out);
                forbid |= v;
            }
        }
    }
}

/// Variable with its Deegan-Packel index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerIndex {
    /// 0-based variable index.
    pub variable: usize,
    pub index: f64,
}

/// `DP(x) = (1/|MP|) * sum over primes P containing x of 1/|P|`, ranked
/// descending with ties broken by variable index.
pub fn deegan_packel(result: &MinSetsResult) -> Result<Vec<PowerIndex>> {
    if result.primes.is_empty() {
        return Err(Error::EmptyRanking);
    }
    let mp = result.primes.len() as f64;
    let mut dp = vec![0.0; result.nvars];
    for p in &result.primes {
        for &v in p {
            dp[v] += 1.0 / p.len() as f64;
        }
    }
    let mut ranking: Vec<PowerIndex> = dp
        .into_iter()
        .enumerate()
        .map(|(variable, s)| PowerIndex {
            variable,
            index: s / mp,
        })
        .collect();
    ranking.sort_by(|a, b| b.index.total_cmp(&a.index).then(a.variable.cmp(&b.variable)));
    Ok(ranking)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsensusReport {
    pub samples: usize,
    pub seed: u64,
    /// `frequencies[i][j]`: share of sampled models whose coordinate `i`
    /// involves variable `j`.
    pub frequencies: Vec<Vec<f64>>,
}

/// Infer under `samples` random variable rankings, each with lex and
/// degrevlex, and count how often each variable appears per coordinate.
pub fn term_order_consensus(ts: &TimeSeries, samples: usize, seed: u64) -> Result<ConsensusReport> {
    if samples == 0 {
        return Err(Error::Invalid("at least one sample is needed".into()));
    }
    let n = ts.nvars;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orders = Vec::with_capacity(2 * samples);
    for _ in 0..samples {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        for kind in [OrderKind::Lex, OrderKind::DegRevLex] {
            orders.push(TermOrder::new(kind, perm.clone())?);
        }
    }
    let models: Vec<InferredModel> = orders
        .par_iter()
        .map(|o| infer_ls(ts, o))
        .collect::<Result<_>>()?;
    let total = models.len() as f64;
    let frequencies = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    models
                        .iter()
                        .filter(|m| m.system.coordinates()[i].depends_on(j))
                        .count() as f64
                        / total
                })
                .collect()
        })
        .collect();
    Ok(ConsensusReport {
        samples,
        seed,
        frequencies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::DEFAULT_BOUND;
    use crate::poly::parse_polynomial;
    use proptest::prelude::*;

    fn system(q: u64, polys: &[&str]) -> FiniteDynamicalSystem {
        let k = Field::with_order(q).unwrap();
        FiniteDynamicalSystem::new(
            polys
                .iter()
                .map(|s| parse_polynomial(s, k, polys.len()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn brute_force_minimal_hitting_sets(gens: &[u64], n: usize) -> Vec<u64> {
        let hits = |s: u64| gens.iter().all(|&g| g & s != 0);
        let mut out: Vec<u64> = (0..1u64 << n)
            .filter(|&s| hits(s) && bits(s).iter().all(|&v| !hits(s & !(1 << v))))
            .collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn recovers_example_one_from_full_table() {
        let f = system(3, &["1 - x1*x2", "1 + 2*x2"]);
        let ts = TimeSeries::from_transition_table(&f, DEFAULT_BOUND).unwrap();
        let model = infer_ls(&ts, &TermOrder::degrevlex()).unwrap();
        for v in 0..9 {
            let s = f.decode(v);
            assert_eq!(model.system.step(&s).unwrap(), f.step(&s).unwrap());
        }
        assert_eq!(model.system.coordinates(), f.coordinates());
    }

    #[test]
    fn single_transition_gives_constant_model() {
        let ts = TimeSeries::new(f2(), 2, vec![vec![vec![0, 0], vec![1, 1]]]).unwrap();
        let m = infer_ls(&ts, &TermOrder::lex()).unwrap();
        assert_eq!(m.system.to_string(), "f1 = 1\nf2 = 1\n");
    }

    #[test]
    fn conflicting_transitions_are_rejected() {
        let ts = TimeSeries::new(
            f2(),
            1,
            vec![vec![vec![0], vec![1]], vec![vec![0], vec![0]]],
        )
        .unwrap();
        let err = infer_ls(&ts, &TermOrder::lex()).unwrap_err();
        assert!(matches!(err, Error::InconsistentData(ref m) if m.contains("(0)")));
    }

    #[test]
    fn discretize_examples() {
        let k3 = Field::prime(3).unwrap();
        let ts = discretize(&[vec![vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, 5.0]]], k3).unwrap();
        assert_eq!(ts.segments()[0], vec![vec![0, 0], vec![1, 0], vec![2, 0]]);
        assert_eq!(discretize(&[], k3), Err(Error::EmptyData));
    }

    #[test]
    fn min_sets_examples() {
        let swap = system(2, &["x2", "x1"]);
        let ts = TimeSeries::from_transition_table(&swap, DEFAULT_BOUND).unwrap();
        let r = min_sets(&ts, 0).unwrap();
        assert_eq!(r.primes, vec![vec![1]]);

        // generators x1*x2, x2*x3
        assert_eq!(minimal_hitting_sets(&[0b011, 0b110]), vec![0b010, 0b101]);

        let constant = system(2, &["1", "x1"]);
        let ts = TimeSeries::from_transition_table(&constant, DEFAULT_BOUND).unwrap();
        let r = min_sets(&ts, 0).unwrap();
        assert!(r.generators.is_empty());
        assert_eq!(r.primes, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn deegan_packel_examples() {
        let mk = |primes: Vec<Vec<usize>>| MinSetsResult {
            coordinate: 0,
            nvars: 3,
            generators: Vec::new(),
            scores: vec![0.0; primes.len()],
            primes,
        };
        let dp = deegan_packel(&mk(vec![vec![1]])).unwrap();
        assert_eq!(dp[0], PowerIndex { variable: 1, index: 1.0 });
        assert_eq!(dp[1].index, 0.0);

        let dp = deegan_packel(&mk(vec![vec![1], vec![0, 2]])).unwrap();
        let v: Vec<(usize, f64)> = dp.iter().map(|p| (p.variable, p.index)).collect();
        assert_eq!(v, vec![(1, 0.5), (0, 0.25), (2, 0.25)]);

        let dp = deegan_packel(&mk(vec![vec![0], vec![1]])).unwrap();
        assert_eq!(dp[0].index, dp[1].index);

        assert_eq!(deegan_packel(&mk(vec![])), Err(Error::EmptyRanking));
    }

    #[test]
    fn consensus_examples() {
        let f = system(2, &["x2", "1"]);
        let ts = TimeSeries::from_transition_table(&f, DEFAULT_BOUND).unwrap();
        let r = term_order_consensus(&ts, 8, 7).unwrap();
        assert_eq!(r.frequencies[0], vec![0.0, 1.0]);
        assert_eq!(r.frequencies[1], vec![0.0, 0.0]);

        // (0,0) -> 0 and (1,1) -> 1: either variable explains the data.
        let ts = TimeSeries::new(
            f2(),
            2,
            vec![vec![vec![0, 0], vec![0, 0]], vec![vec![1, 1], vec![1, 1]]],
        )
        .unwrap();
        let r = term_order_consensus(&ts, 16, 1).unwrap();
        for &p in &r.frequencies[0] {
            assert!(p > 0.0 && p < 1.0, "{p}");
        }
        assert_eq!(r, term_order_consensus(&ts, 16, 1).unwrap());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let k4 = Field::gf4();
        let ts = TimeSeries::new(
            k4,
            2,
            vec![vec![vec![0, 1], vec![2, 3]], vec![vec![3, 3], vec![0, 0], vec![1, 2]]],
        )
        .unwrap();
        let text = ts.to_csv();
        assert_eq!(TimeSeries::from_csv(&text, k4).unwrap(), ts);

        let err = TimeSeries::from_csv("x1,x2\n0,1\n1, 7\n", f2()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 4, .. }), "{err:?}");
        let err = TimeSeries::from_csv("x1,y\n", f2()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 4, .. }), "{err:?}");
        assert_eq!(
            parse_real_csv("x1\n0.5\n1.5\n\n2\n3\n").unwrap(),
            vec![vec![vec![0.5], vec![1.5]], vec![vec![2.0], vec![3.0]]]
        );
    }

    fn arb_system() -> impl Strategy<Value = FiniteDynamicalSystem> {
        (prop::sample::select(vec![2u64, 3]), 1usize..=3).prop_flat_map(|(q, n)| {
            let states = (q as usize).pow(n as u32);
            prop::collection::vec(prop::collection::vec(0..q as u32, n), states).prop_map(
                move |table| {
                    // Interpolate a random function table into a system.
                    let k = Field::with_order(q).unwrap();
                    let pts: Vec<Vec<u32>> = (0..states as u64)
                        .map(|v| FiniteDynamicalSystem::identity(k, n).decode(v))
                        .collect();
                    let ps = PointSet::new(k, n, pts).unwrap();
                    let ideal = ideal_of_points(&ps, &TermOrder::degrevlex()).unwrap();
                    let coords = (0..n)
                        .map(|i| {
                            let vals: Vec<u32> = table.iter().map(|row| row[i]).collect();
                            ideal.interpolate(&vals).unwrap()
                        })
                        .collect();
                    FiniteDynamicalSystem::new(coords).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn full_table_round_trip(f in arb_system(), lex in any::<bool>()) {
            let ts = TimeSeries::from_transition_table(&f, DEFAULT_BOUND).unwrap();
            let order = if lex { TermOrder::lex() } else { TermOrder::degrevlex() };
            let m = infer_ls(&ts, &order).unwrap();
            prop_assert_eq!(m.system.coordinates(), f.coordinates());
        }

        #[test]
        fn partial_data_is_fitted(f in arb_system(), keep in prop::collection::vec(any::<bool>(), 27)) {
            let full = TimeSeries::from_transition_table(&f, DEFAULT_BOUND).unwrap();
            let segs: Vec<Vec<State>> = full
                .segments()
                .iter()
                .zip(keep.iter().cycle())
                .filter(|(_, &k)| k)
                .map(|(s, _)| s.clone())
                .collect();
            prop_assume!(!segs.is_empty());
            let ts = TimeSeries::new(f.field(), f.nvars(), segs).unwrap();
            let m = infer_ls(&ts, &TermOrder::degrevlex()).unwrap();
            prop_assert!(m.fits(&ts));
        }

        #[test]
        fn hitting_sets_match_brute_force(
            n in 1usize..=10,
            raw in prop::collection::vec(1u64..1024, 0..30),
        ) {
            let gens: Vec<u64> = raw
                .into_iter()
                .map(|g| g & ((1 << n) - 1))
                .filter(|&g| g != 0)
                .collect();
            prop_assert_eq!(minimal_hitting_sets(&gens), brute_force_minimal_hitting_sets(&gens, n));
        }

        #[test]
        fn true_support_contains_a_prime(f in arb_system()) {
            let ts = TimeSeries::from_transition_table(&f, DEFAULT_BOUND).unwrap();
            for i in 0..f.nvars() {
                let r = min_sets(&ts, i).unwrap();
                let support = f.coordinates()[i].variables();
                prop_assert!(r.primes.iter().any(|p| p.iter().all(|v| support.contains(v))));
                let total: f64 = r.scores.iter().sum();
                prop_assert!((total - 1.0).abs() < 1e-12);
                if r.primes.iter().any(|p| !p.is_empty()) {
                    let dp: f64 = deegan_packel(&r).unwrap().iter().map(|p| p.index).sum();
                    prop_assert!((dp - 1.0).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn min_sets_ignores_data_order(f in arb_system(), seed in any::<u64>()) {
            let ts = TimeSeries::from_transition_table(&f, DEFAULT_BOUND).unwrap();
            let mut segs = ts.segments().to_vec();
            segs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let shuffled = TimeSeries::new(f.field(), f.nvars(), segs).unwrap();
            for i in 0..f.nvars() {
                prop_assert_eq!(min_sets(&ts, i).unwrap(), min_sets(&shuffled, i).unwrap());
            }
        }
    }
}
