use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clockspace::Region;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    Tester,
    Impl(usize),
}

/// Bounded-fairness scheduler. An enabled implementation edge passed over
/// `bound` times in the same implementation region is fired next time it
/// is enabled there; the tester is granted a move after at most `bound`
/// consecutive implementation moves.
#[derive(Clone, Debug)]
pub struct FairScheduler {
    pub bound: u32,
    rng: ChaCha8Rng,
    starved: HashMap<(usize, Region, usize), u32>,
    tester_waiting: u32,
    pub max_starvation: u32,
    pub forced: usize,
}

impl FairScheduler {
    pub fn new(bound: u32, seed: u64) -> FairScheduler {
        FairScheduler {
            bound: bound.max(1),
            rng: ChaCha8Rng::seed_from_u64(seed),
            starved: HashMap::new(),
            tester_waiting: 0,
            max_starvation: 0,
            forced: 0,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Picks who moves next. `edges` are the implementation edges that can
    /// fire within the current window, `key` the implementation location
    /// and region.
    pub fn choose(&mut self, key: (usize, &Region), edges: &[usize], tester: bool) -> Choice {
        assert!(tester || !edges.is_empty(), "nothing can move");
        let count = |s: &Self, e: usize| s.starved.get(&(key.0, key.1.clone(), e)).copied().unwrap_or(0);
        let choice = if tester && (edges.is_empty() || self.tester_waiting >= self.bound) {
            if !edges.is_empty() {
                self.forced += 1;
            }
            Choice::Tester
        } else if let Some(k) =
            (0..edges.len()).filter(|&k| count(self, edges[k]) >= self.bound).max_by_key(|&k| (count(self, edges[k]), usize::MAX - edges[k]))
        {
            self.forced += 1;
            Choice::Impl(k)
        } else {
            let n = edges.len() + usize::from(tester);
            let k = self.rng.random_range(0..n);
            if k < edges.len() {
                Choice::Impl(k)
            } else {
                Choice::Tester
            }
        };
        for (k, &e) in edges.iter().enumerate() {
            let c = self.starved.entry((key.0, key.1.clone(), e)).or_insert(0);
            if choice == Choice::Impl(k) {
                *c = 0;
            } else {
                *c += 1;
                self.max_starvation = self.max_starvation.max(*c);
            }
        }
        match choice {
            Choice::Tester => self.tester_waiting = 0,
            Choice::Impl(_) => self.tester_waiting += 1,
        }
        choice
    }
}
