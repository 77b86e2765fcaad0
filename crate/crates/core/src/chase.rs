//! The chase: a faithful man asks his wife, then the wife of her lover, and
//! so on until a woman without a lover accepts.
//!
//! [`induced_bijection`] runs the same walk over abstract finite sets: given a
//! bijection `phi: X -> Y` and a bijection `psi` from `X \ A` onto `Y \ B`,
//! each `a` in `A` is sent to the first element of `phi(a), phi(psi^-1(phi(a))), ...`
//! that lies outside the range of `psi`. The village is the instance where
//! `phi` is the wife map (the identity on indices) and `psi` the mistress map.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// The women a faithful man asks, in order. The last one accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChaseTrace {
    pub man: u32,
    pub asked: Vec<u32>,
}

impl ChaseTrace {
    pub fn requests(&self) -> usize {
        self.asked.len()
    }

    /// The faithful woman who accepts.
    pub fn matched(&self) -> u32 {
        *self.asked.last().expect("a trace always holds at least the wife")
    }
}

impl Serialize for ChaseTrace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            man: u32,
            asked: &'a [u32],
            requests: usize,
        }
        Repr {
            man: self.man,
            asked: &self.asked,
            requests: self.requests(),
        }
        .serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub woman: u32,
    pub requests: usize,
}

/// Faithful man -> (faithful woman, requests).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub pairs: BTreeMap<u32, Pairing>,
}

impl Matching {
    pub fn total_requests(&self) -> usize {
        self.pairs.values().map(|p| p.requests).sum()
    }

    /// Requests of Mr. c+1, ..., Mr. c+f, in that order.
    pub fn request_vector(&self) -> Vec<u32> {
        self.pairs.values().map(|p| p.requests as u32).collect()
    }
}

fn check_faithful(s: &Scenario, m: u32) -> Result<()> {
    if m <= s.c() {
        return Err(Error::NotFaithful { man: m, c: s.c() });
    }
    if m > s.couples() {
        return Err(Error::OutOfRange {
            value: m as i64,
            max: s.couples() as i64,
        });
    }
    Ok(())
}

/// Full trace of Mr. `m`'s requests.
pub fn chase_one(s: &Scenario, m: u32) -> Result<ChaseTrace> {
    check_faithful(s, m)?;
    let bound = s.c() as usize + 1;
    let mut asked = vec![m];
    let mut woman = m;
    while let Some(lover) = s.lover_unchecked(woman) {
        // the lover's wife is Mrs. `lover`
        woman = lover;
        asked.push(woman);
        if asked.len() > bound {
            return Err(Error::InternalCycle { man: m, bound });
        }
    }
    Ok(ChaseTrace { man: m, asked })
}

/// Request count and matched woman for Mr. `m`, without recording the trace.
pub fn chase_requests(s: &Scenario, m: u32) -> Result<(u32, usize)> {
    check_faithful(s, m)?;
    let bound = s.c() as usize + 1;
    let mut woman = m;
    let mut requests = 1;
    while let Some(lover) = s.lover_unchecked(woman) {
        woman = lover;
        requests += 1;
        if requests > bound {
            return Err(Error::InternalCycle { man: m, bound });
        }
    }
    Ok((woman, requests))
}

/// Chases every faithful man.
pub fn match_all(s: &Scenario) -> Result<Matching> {
    let pairs = s
        .faithful_men()
        .map(|m| chase_requests(s, m).map(|(woman, requests)| (m, Pairing { woman, requests })))
        .collect::<Result<_>>()?;
    Ok(Matching { pairs })
}

/// Where `a` lands and how many applications of `phi` it took (`k + 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chased {
    pub image: usize,
    pub steps: usize,
}

/// Generic involution-principle bijection on index sets `X = Y = 1..=size_x`.
///
/// `phi[x - 1]` is the image of `x`. `psi` must be injective with domain
/// exactly `X \ a_members` and values in `Y`.
pub fn induced_bijection(
    size_x: usize,
    phi: &[usize],
    psi: &BTreeMap<usize, usize>,
    a_members: &BTreeSet<usize>,
) -> Result<BTreeMap<usize, Chased>> {
    if phi.len() != size_x {
        return Err(Error::InvalidPhi(format!(
            "{} images given for a set of size {size_x}",
            phi.len()
        )));
    }
    let mut seen = vec![false; size_x + 1];
    for &y in phi {
        if y < 1 || y > size_x {
            return Err(Error::InvalidPhi(format!("image {y} outside 1..={size_x}")));
        }
        if std::mem::replace(&mut seen[y], true) {
            return Err(Error::InvalidPhi(format!("image {y} repeated")));
        }
    }
    if let Some(&a) = a_members.iter().find(|&&a| a < 1 || a > size_x) {
        return Err(Error::InvalidPsi(format!("A member {a} outside 1..={size_x}")));
    }

    // psi_inverse[y] = x with psi(x) = y, 0 when y is outside range(psi)
    let mut psi_inverse = vec![0usize; size_x + 1];
    for x in 1..=size_x {
        let in_domain = psi.contains_key(&x);
        if in_domain == a_members.contains(&x) {
            return Err(Error::InvalidPsi(format!(
                "domain of psi must be X \\ A; mismatch at {x}"
            )));
        }
    }
    if let Some((&x, _)) = psi.iter().find(|(&x, _)| x < 1 || x > size_x) {
        return Err(Error::InvalidPsi(format!("domain element {x} outside X")));
    }
    for (&x, &y) in psi {
        if y < 1 || y > size_x {
            return Err(Error::InvalidPsi(format!("psi({x}) = {y} outside Y")));
        }
        if psi_inverse[y] != 0 {
            return Err(Error::InvalidPsi(format!("psi is not injective at {y}")));
        }
        psi_inverse[y] = x;
    }

    let bound = size_x - a_members.len() + 1;
    let mut out = BTreeMap::new();
    for &a in a_members {
        let mut y = phi[a - 1];
        let mut steps = 1;
        while psi_inverse[y] != 0 {
            y = phi[psi_inverse[y] - 1];
            steps += 1;
            if steps > bound {
                return Err(Error::NoTermination { start: a, bound });
            }
        }
        out.insert(a, Chased { image: y, steps });
    }
    Ok(out)
}

/// The village as an instance of [`induced_bijection`]: X = men, Y = women,
/// phi = wife map, psi = mistress map, A = faithful men.
pub fn village_encoding(
    s: &Scenario,
) -> (usize, Vec<usize>, BTreeMap<usize, usize>, BTreeSet<usize>) {
    let n = s.couples() as usize;
    let phi = (1..=n).collect();
    let psi = s
        .mistress()
        .iter()
        .enumerate()
        .map(|(i, &w)| (i + 1, w as usize))
        .collect();
    let a = s.faithful_men().map(|m| m as usize).collect();
    (n, phi, psi, a)
}
