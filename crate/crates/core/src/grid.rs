//! Torus configuration with exact integer happiness bookkeeping.

use std::borrow::Cow;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prefix::{PlusPrefix, Rect};
use crate::rng::{self, RNG_ID};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(i8)]
pub enum Spin {
    Minus = -1,
    Plus = 1,
}

impl Spin {
    pub fn flipped(self) -> Spin {
        match self {
            Spin::Minus => Spin::Plus,
            Spin::Plus => Spin::Minus,
        }
    }

    pub fn value(self) -> i8 {
        self as i8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    /// Cell displaced by `(dr, dc)` on a torus of side `n`.
    pub fn offset(self, dr: i64, dc: i64, n: usize) -> Cell {
        let n = n as i64;
        Cell {
            row: (self.row as i64 + dr).rem_euclid(n) as usize,
            col: (self.col as i64 + dc).rem_euclid(n) as usize,
        }
    }
}

/// Signed minimal displacement from `a` to `b` along one torus axis.
pub fn torus_delta(a: usize, b: usize, n: usize) -> i64 {
    let d = (b as i64 - a as i64).rem_euclid(n as i64);
    if d > n as i64 / 2 {
        d - n as i64
    } else {
        d
    }
}

/// l-infinity distance on the torus.
pub fn torus_linf(a: Cell, b: Cell, n: usize) -> usize {
    torus_delta(a.row, b.row, n)
        .unsigned_abs()
        .max(torus_delta(a.col, b.col, n).unsigned_abs()) as usize
}

/// `ceil(tau_tilde * size)`, treating products within 1e-9 of an integer as exact.
pub fn threshold_count(tau_tilde: f64, size: usize) -> usize {
    let x = tau_tilde * size as f64;
    let r = x.round();
    let k = if (x - r).abs() < 1e-9 { r } else { x.ceil() };
    (k.max(0.0) as usize).min(size)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub n: usize,
    pub w: usize,
    pub tau_tilde: f64,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub p: f64,
    pub seed: u64,
    pub rng_id: String,
}

impl GridConfig {
    /// Validated configuration. Grids with `n < 8w` are rejected; use
    /// [`GridConfig::new_unchecked_size`] to accept anything with `n >= 2w+1`.
    pub fn new(n: usize, w: usize, tau_tilde: f64, p: f64, seed: u64) -> Result<Self> {
        if n < 8 * w {
            return Err(Error::InvalidConfig(format!(
                "n = {n} is below the recommended minimum 8w = {} (override to accept)",
                8 * w
            )));
        }
        Self::new_unchecked_size(n, w, tau_tilde, p, seed)
    }

    pub fn new_unchecked_size(n: usize, w: usize, tau_tilde: f64, p: f64, seed: u64) -> Result<Self> {
        if w == 0 {
            return Err(Error::InvalidConfig("horizon w must be at least 1".into()));
        }
        if n < 2 * w + 1 {
            return Err(Error::InvalidConfig(format!(
                "n = {n} must be at least 2w+1 = {}",
                2 * w + 1
            )));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidConfig(format!("p = {p} outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&tau_tilde) {
            return Err(Error::InvalidConfig(format!("tau_tilde = {tau_tilde} outside [0, 1]")));
        }
        let big_n = (2 * w + 1) * (2 * w + 1);
        Ok(GridConfig {
            n,
            w,
            tau_tilde,
            k: threshold_count(tau_tilde, big_n),
            big_n,
            p,
            seed,
            rng_id: RNG_ID.to_string(),
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Effective intolerance `K / N`.
    pub fn tau(&self) -> f64 {
        self.k as f64 / self.big_n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Happiness {
    Happy,
    UnhappyIneligible,
    UnhappyEligible,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlipEvent {
    pub agent: Cell,
    pub pre_count: u32,
    pub flip_index: u64,
    pub continuous_time: f64,
}

/// Dense array plus position index: O(1) insert, remove and uniform sampling.
#[derive(Debug, Clone, Default)]
pub struct EligibleSet {
    items: Vec<u32>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl EligibleSet {
    fn with_capacity(cells: usize) -> Self {
        EligibleSet { items: Vec::new(), pos: vec![ABSENT; cells] }
    }

    #[inline]
    fn contains(&self, idx: usize) -> bool {
        self.pos[idx] != ABSENT
    }

    #[inline]
    fn insert(&mut self, idx: usize) {
        if self.pos[idx] == ABSENT {
            self.pos[idx] = self.items.len() as u32;
            self.items.push(idx as u32);
        }
    }

    #[inline]
    fn remove(&mut self, idx: usize) {
        let p = self.pos[idx];
        if p == ABSENT {
            return;
        }
        let last = *self.items.last().unwrap();
        self.items.swap_remove(p as usize);
        if last as usize != idx {
            self.pos[last as usize] = p;
        }
        self.pos[idx] = ABSENT;
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.items
    }
}

#[derive(Debug, Clone)]
pub struct GridState {
    config: GridConfig,
    types: Vec<Spin>,
    same: Vec<u32>,
    eligible: EligibleSet,
    flips: u64,
    time: f64,
    prefix: Option<PlusPrefix>,
}

impl GridState {
    /// Fresh i.i.d. Bernoulli(p) configuration drawn from the config's seed.
    pub fn new_random(config: GridConfig) -> Result<Self> {
        let mut rng = rng::stream_rng(config.seed, rng::INIT_STREAM);
        let p = config.p;
        let types = (0..config.n * config.n)
            .map(|_| if rng.random_bool(p) { Spin::Plus } else { Spin::Minus })
            .collect();
        Self::from_types(config, types)
    }

    pub fn from_types(config: GridConfig, types: Vec<Spin>) -> Result<Self> {
        let n = config.n;
        if types.len() != n * n {
            return Err(Error::InvalidConfig(format!(
                "expected {} cells, got {}",
                n * n,
                types.len()
            )));
        }
        let mut state = GridState {
            eligible: EligibleSet::with_capacity(n * n),
            same: vec![0; n * n],
            types,
            config,
            flips: 0,
            time: 0.0,
            prefix: None,
        };
        state.recount_all();
        Ok(state)
    }

    pub fn from_fn(config: GridConfig, mut f: impl FnMut(Cell) -> Spin) -> Result<Self> {
        let n = config.n;
        let types = (0..n * n).map(|i| f(Cell::new(i / n, i % n))).collect();
        Self::from_types(config, types)
    }

    fn recount_all(&mut self) {
        let n = self.config.n;
        let w = self.config.w;
        let prefix = PlusPrefix::build(n, &self.types);
        let big_n = self.config.big_n as u32;
        for idx in 0..n * n {
            let c = Cell::new(idx / n, idx % n);
            let plus = prefix.count(Rect::square(c, w));
            self.same[idx] = match self.types[idx] {
                Spin::Plus => plus,
                Spin::Minus => big_n - plus,
            };
        }
        self.eligible = EligibleSet::with_capacity(n * n);
        for idx in 0..n * n {
            if self.eligible_count(self.same[idx]) {
                self.eligible.insert(idx);
            }
        }
        self.prefix = Some(prefix);
    }

    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn w(&self) -> usize {
        self.config.w
    }

    pub fn k(&self) -> usize {
        self.config.k
    }

    pub fn neighborhood_size(&self) -> usize {
        self.config.big_n
    }

    pub fn flips(&self) -> u64 {
        self.flips
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn advance_time(&mut self, dt: f64) {
        self.time += dt;
    }

    #[inline]
    pub fn index(&self, c: Cell) -> usize {
        c.row * self.config.n + c.col
    }

    #[inline]
    pub fn cell(&self, idx: usize) -> Cell {
        Cell::new(idx / self.config.n, idx % self.config.n)
    }

    pub fn types(&self) -> &[Spin] {
        &self.types
    }

    #[inline]
    pub fn spin(&self, c: Cell) -> Spin {
        self.types[self.index(c)]
    }

    #[inline]
    pub fn same_count(&self, c: Cell) -> u32 {
        self.same[self.index(c)]
    }

    pub fn same_counts(&self) -> &[u32] {
        &self.same
    }

    #[inline]
    fn eligible_count(&self, same: u32) -> bool {
        let k = self.config.k as u32;
        same < k && self.config.big_n as u32 - same + 1 >= k
    }

    pub fn happiness(&self, c: Cell) -> Happiness {
        let s = self.same_count(c);
        if s >= self.config.k as u32 {
            Happiness::Happy
        } else if self.eligible_count(s) {
            Happiness::UnhappyEligible
        } else {
            Happiness::UnhappyIneligible
        }
    }

    pub fn is_unhappy(&self, c: Cell) -> bool {
        self.same_count(c) < self.config.k as u32
    }

    pub fn is_eligible(&self, c: Cell) -> bool {
        self.eligible.contains(self.index(c))
    }

    pub fn eligible(&self) -> &EligibleSet {
        &self.eligible
    }

    pub fn eligible_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.eligible.as_slice().iter().map(|&i| self.cell(i as usize))
    }

    pub fn unhappy_count(&self) -> usize {
        let k = self.config.k as u32;
        self.same.iter().filter(|&&s| s < k).count()
    }

    /// Sum over agents of their same-type counts.
    pub fn lyapunov(&self) -> i64 {
        self.same.iter().map(|&s| s as i64).sum()
    }

    /// Flip an eligible agent and update every count it touches.
    pub fn apply_flip(&mut self, c: Cell) -> Result<FlipEvent> {
        let idx = self.index(c);
        if !self.eligible.contains(idx) {
            return Err(Error::NotEligible(c));
        }
        let pre_count = self.same[idx];
        let new = self.types[idx].flipped();
        self.set_spin(c, new);
        self.flips += 1;
        Ok(FlipEvent {
            agent: c,
            pre_count,
            flip_index: self.flips,
            continuous_time: self.time,
        })
    }

    /// Overwrite one cell without any eligibility check (hand-built
    /// configurations, hypothetical edits). O(w²).
    pub fn set_spin(&mut self, c: Cell, spin: Spin) {
        let idx = self.index(c);
        if self.types[idx] == spin {
            return;
        }
        let n = self.config.n;
        let w = self.config.w as i64;
        self.types[idx] = spin;
        self.same[idx] = self.config.big_n as u32 - self.same[idx] + 1;
        for dr in -w..=w {
            let r = (c.row as i64 + dr).rem_euclid(n as i64) as usize;
            let base = r * n;
            for dc in -w..=w {
                let col = (c.col as i64 + dc).rem_euclid(n as i64) as usize;
                let v = base + col;
                if v != idx {
                    if self.types[v] == spin {
                        self.same[v] += 1;
                    } else {
                        self.same[v] -= 1;
                    }
                }
                if self.eligible_count(self.same[v]) {
                    self.eligible.insert(v);
                } else {
                    self.eligible.remove(v);
                }
            }
        }
        self.prefix = None;
    }

    /// Number of `+1` agents in a torus rectangle. The prefix table is
    /// rebuilt lazily on the first query after a flip.
    pub fn plus_count_in_rect(&mut self, rect: Rect) -> u32 {
        if self.prefix.is_none() {
            self.prefix = Some(PlusPrefix::build(self.config.n, &self.types));
        }
        self.prefix.as_ref().unwrap().count(rect)
    }

    /// Prefix table for the current configuration, borrowed when the cache is fresh.
    pub fn plus_prefix(&self) -> Cow<'_, PlusPrefix> {
        match &self.prefix {
            Some(p) => Cow::Borrowed(p),
            None => Cow::Owned(PlusPrefix::build(self.config.n, &self.types)),
        }
    }

    /// Same-type count of `c` by direct scan of its neighborhood.
    pub fn recount_same(&self, c: Cell) -> u32 {
        let w = self.config.w as i64;
        let n = self.config.n;
        let t = self.spin(c);
        let mut count = 0;
        for dr in -w..=w {
            for dc in -w..=w {
                if self.spin(c.offset(dr, dc, n)) == t {
                    count += 1;
                }
            }
        }
        count
    }

    /// Full audit of counts and the eligible index against brute force.
    pub fn verify_consistency(&self) -> std::result::Result<(), String> {
        let n = self.config.n;
        for idx in 0..n * n {
            let c = self.cell(idx);
            let brute = self.recount_same(c);
            if brute != self.same[idx] {
                return Err(format!("count mismatch at {c:?}: stored {} brute {brute}", self.same[idx]));
            }
            if self.eligible_count(brute) != self.eligible.contains(idx) {
                return Err(format!("eligibility mismatch at {c:?}"));
            }
        }
        for (p, &i) in self.eligible.as_slice().iter().enumerate() {
            if self.eligible.pos[i as usize] as usize != p {
                return Err(format!("eligible index corrupt at slot {p}"));
            }
        }
        Ok(())
    }

    /// Every agent's type negated; counts and eligibility are unchanged.
    pub fn negated(&self) -> GridState {
        let mut out = self.clone();
        for t in out.types.iter_mut() {
            *t = t.flipped();
        }
        out.prefix = None;
        out
    }

    /// Configuration shifted by `(dr, dc)` on the torus: the cell at `c`
    /// moves to `c + (dr, dc)`.
    pub fn translated(&self, dr: i64, dc: i64) -> GridState {
        let n = self.config.n;
        let mut types = vec![Spin::Minus; n * n];
        for idx in 0..n * n {
            let dst = self.cell(idx).offset(dr, dc, n);
            types[dst.row * n + dst.col] = self.types[idx];
        }
        GridState::from_types(self.config.clone(), types).expect("same dimensions")
    }
}
