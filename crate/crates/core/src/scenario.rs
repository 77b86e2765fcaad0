//! The village model.
//!
//! Mr. `i` and Mrs. `i` are married for every `i` in `1..=c+f`. Men `1..=c`
//! cheat; men `c+1..=c+f` are faithful. A scenario is the injective list
//! `mistress` where Mrs. `mistress[i-1]` is the mistress of Mr. `i`. A man may
//! take his own wife as mistress. All public indices are 1-based.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated, immutable mistress assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioJson", into = "ScenarioJson")]
pub struct Scenario {
    c: u32,
    f: u32,
    mistress: Vec<u32>,
    // lover[w-1] = lover of Mrs. w, 0 when she is faithful
    lover: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioJson {
    c: i64,
    f: i64,
    mistress: Vec<i64>,
}

impl TryFrom<ScenarioJson> for Scenario {
    type Error = Error;

    fn try_from(raw: ScenarioJson) -> Result<Self> {
        validate(raw.c, raw.f, &raw.mistress)
    }
}

impl From<Scenario> for ScenarioJson {
    fn from(s: Scenario) -> Self {
        ScenarioJson {
            c: s.c as i64,
            f: s.f as i64,
            mistress: s.mistress.iter().map(|&w| w as i64).collect(),
        }
    }
}

/// Checks every invariant and builds the inverse (lover) table.
pub fn validate(c: i64, f: i64, mistress: &[i64]) -> Result<Scenario> {
    if c < 0 || f < 0 {
        return Err(Error::NegativeCount { c, f });
    }
    let n = c.checked_add(f).filter(|&n| n <= u32::MAX as i64).ok_or_else(|| {
        Error::InvalidArgument(format!("c+f = {c}+{f} does not fit in 32 bits"))
    })?;
    if mistress.len() as i64 != c {
        return Err(Error::LengthMismatch {
            expected: c as usize,
            found: mistress.len(),
        });
    }
    let mut lover = vec![0u32; n as usize];
    for (i, &w) in mistress.iter().enumerate() {
        if w < 1 || w > n {
            return Err(Error::OutOfRange { value: w, max: n });
        }
        let slot = &mut lover[(w - 1) as usize];
        if *slot != 0 {
            return Err(Error::NonInjective(w as u32));
        }
        *slot = i as u32 + 1;
    }
    Ok(Scenario {
        c: c as u32,
        f: f as u32,
        mistress: mistress.iter().map(|&w| w as u32).collect(),
        lover,
    })
}

impl Scenario {
    pub fn new(c: u32, f: u32, mistress: Vec<u32>) -> Result<Self> {
        let raw: Vec<i64> = mistress.iter().map(|&w| w as i64).collect();
        validate(c as i64, f as i64, &raw)
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// Number of couples, `c + f`.
    pub fn couples(&self) -> u32 {
        self.c + self.f
    }

    pub fn mistress(&self) -> &[u32] {
        &self.mistress
    }

    /// Mistress of cheating Mr. `m` (`1 <= m <= c`).
    pub fn mistress_of(&self, m: u32) -> Option<u32> {
        m.checked_sub(1)
            .and_then(|i| self.mistress.get(i as usize))
            .copied()
    }

    /// The unique man whose mistress is Mrs. `w`, if any.
    pub fn lover_of(&self, w: u32) -> Result<Option<u32>> {
        if w < 1 || w > self.couples() {
            return Err(Error::OutOfRange {
                value: w as i64,
                max: self.couples() as i64,
            });
        }
        Ok(self.lover_unchecked(w))
    }

    #[inline]
    pub(crate) fn lover_unchecked(&self, w: u32) -> Option<u32> {
        match self.lover[(w - 1) as usize] {
            0 => None,
            m => Some(m),
        }
    }

    /// Faithful men, `c+1..=c+f`.
    pub fn faithful_men(&self) -> std::ops::RangeInclusive<u32> {
        self.c + 1..=self.c + self.f
    }

    /// Women without a lover, in increasing order.
    pub fn faithful_women(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=self.couples()).filter(move |&w| self.lover_unchecked(w).is_none())
    }
}

/// `(c+f)! / f!`, the number of injective mistress assignments.
pub fn scenario_count(c: u32, f: u32) -> BigUint {
    (f as u64 + 1..=c as u64 + f as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Uniform random scenario.
///
/// The generator is ChaCha8 seeded through `SeedableRng::seed_from_u64`
/// (a PCG32 expansion of the 64-bit seed into the 256-bit key), so the output
/// depends only on `(c, f, seed)`. The mistress list is the first `c` slots of
/// a partial Fisher-Yates shuffle of `1..=c+f`; bounded draws are made on
/// `u64` so the stream is identical on 32- and 64-bit targets.
pub fn random_scenario(c: u32, f: u32, seed: u64) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_scenario_with(c, f, &mut rng)
}

pub(crate) fn random_scenario_with<R: Rng + ?Sized>(c: u32, f: u32, rng: &mut R) -> Scenario {
    let n = (c + f) as usize;
    let mut pool: Vec<u32> = (1..=c + f).collect();
    for i in 0..c as usize {
        let j = i + rng.gen_range(0..(n - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(c as usize);
    let mut lover = vec![0u32; n];
    for (i, &w) in pool.iter().enumerate() {
        lover[(w - 1) as usize] = i as u32 + 1;
    }
    Scenario {
        c,
        f,
        mistress: pool,
        lover,
    }
}

/// Every scenario for `(c, f)`, in lexicographic order of the mistress list.
pub fn enumerate_scenarios(c: u32, f: u32) -> ScenarioIter {
    ScenarioIter::new(c, f)
}

/// Lexicographic walk over injections `[1..=c] -> [1..=c+f]`.
#[derive(Debug, Clone)]
pub struct ScenarioIter {
    c: u32,
    f: u32,
    current: Vec<u32>,
    used: Vec<bool>,
    started: bool,
    done: bool,
}

impl ScenarioIter {
    fn new(c: u32, f: u32) -> Self {
        let n = (c + f) as usize;
        let mut used = vec![false; n + 1];
        let current: Vec<u32> = (1..=c).collect();
        for &w in &current {
            used[w as usize] = true;
        }
        ScenarioIter {
            c,
            f,
            current,
            used,
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.c + self.f;
        for pos in (0..self.current.len()).rev() {
            let old = self.current[pos];
            self.used[old as usize] = false;
            if let Some(next) = (old + 1..=n).find(|&w| !self.used[w as usize]) {
                self.current[pos] = next;
                self.used[next as usize] = true;
                let mut candidate = 1;
                for slot in pos + 1..self.current.len() {
                    while self.used[candidate as usize] {
                        candidate += 1;
                    }
                    self.current[slot] = candidate;
                    self.used[candidate as usize] = true;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for ScenarioIter {
    type Item = Scenario;

    fn next(&mut self) -> Option<Scenario> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.advance() {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        let mut lover = vec![0u32; (self.c + self.f) as usize];
        for (i, &w) in self.current.iter().enumerate() {
            lover[(w - 1) as usize] = i as u32 + 1;
        }
        Some(Scenario {
            c: self.c,
            f: self.f,
            mistress: self.current.clone(),
            lover,
        })
    }
}
