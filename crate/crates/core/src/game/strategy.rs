use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde_json::{json, Value};
use thiserror::Error;

use crate::clockspace::{Rational, Region};
use crate::semantics::{reset_choices, RegionGraph, SemanticsError};

use super::{GameView, Rank, RankMap};

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("test purpose is unsatisfiable: the initial state is not covered by the winning sets")]
    Unsatisfiable,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// Decision taken in one region. Targets are delay successors of the
/// region the decision belongs to; a target equal to it means no delay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Play { target: Region, edge: usize },
    Wait { target: Region },
    WaitMaximal { target: Region },
}

impl Move {
    pub fn target(&self) -> &Region {
        match self {
            Move::Play { target, .. } | Move::Wait { target } | Move::WaitMaximal { target } => target,
        }
    }
}

/// Memoryless strategy over the reachable regions of a tester.
#[derive(Clone, Debug)]
pub struct Strategy {
    pub max: i64,
    pub moves: BTreeMap<(usize, Region), Move>,
    pub ranks: BTreeMap<(usize, Region), Rank>,
    game: GameView,
}

impl Strategy {
    pub fn game(&self) -> &GameView {
        &self.game
    }

    pub fn get(&self, loc: usize, r: &Region) -> Option<&Move> {
        self.moves.get(&(loc, r.clone()))
    }

    pub fn lookup(&self, loc: usize, v: &[Rational]) -> Option<&Move> {
        self.get(loc, &Region::of_valuation(v, self.max))
    }

    pub fn rank(&self, loc: usize, r: &Region) -> Rank {
        self.ranks.get(&(loc, r.clone())).copied().unwrap_or(Rank::NotCovered)
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Short form: `play(0, ship2?)`, `play(x > 1, ζ)`, `wait(x = 3)`, `wait-max`.
    pub fn describe(&self, r: &Region, m: &Move) -> String {
        let a = &self.game.automaton;
        let at = |t: &Region| if t == r { "0".to_string() } else { t.display(&a.clocks).to_string() };
        match m {
            Move::Play { target, edge } => {
                format!("play({}, {})", at(target), self.game.action_label(a.edges[*edge].action))
            }
            Move::Wait { target } => format!("wait({})", at(target)),
            Move::WaitMaximal { .. } => "wait-max".to_string(),
        }
    }

    /// Human-readable table, one region per row.
    pub fn table(&self) -> String {
        let a = &self.game.automaton;
        let rows: Vec<[String; 4]> = self
            .moves
            .iter()
            .map(|((l, r), m)| {
                [
                    a.locations[*l].name.clone(),
                    r.display(&a.clocks).to_string(),
                    self.rank(*l, r).to_string(),
                    self.describe(r, m),
                ]
            })
            .collect();
        let head = ["location", "region", "rank", "move"];
        let mut width = head.map(str::len);
        for row in &rows {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |cells: [&str; 4]| {
            let padded: Vec<String> =
                cells.iter().zip(width).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
            let _ = writeln!(out, "{}", padded.join(" | ").trim_end());
        };
        line(head);
        for row in &rows {
            line([&row[0], &row[1], &row[2], &row[3]]);
        }
        out
    }

    /// Machine-readable form: one JSON object per region.
    pub fn to_json(&self) -> Value {
        let a = &self.game.automaton;
        let entries: Vec<Value> = self
            .moves
            .iter()
            .map(|((l, r), m)| {
                let mut v = json!({
                    "location": a.locations[*l].name,
                    "region": r.display(&a.clocks).to_string(),
                    "rank": match self.rank(*l, r) {
                        Rank::At(j, i) => json!([j, i]),
                        Rank::NotCovered => Value::Null,
                    },
                    "target": m.target().display(&a.clocks).to_string(),
                });
                match m {
                    Move::Play { edge, .. } => {
                        v["move"] = json!("play");
                        v["edge"] = json!(edge);
                        v["action"] = json!(self.game.action_label(a.edges[*edge].action));
                    }
                    Move::Wait { .. } => v["move"] = json!("wait"),
                    Move::WaitMaximal { .. } => v["move"] = json!("wait-max"),
                }
                v
            })
            .collect();
        json!({ "tester": a.name, "max_constant": self.max, "moves": entries })
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table())
    }
}

/// Rank-lowering strategy: the earliest delay successor from which a
/// controllable edge enters a lower rank, else the earliest one lying in
/// a lower rank, else the maximal delay.
pub fn synthesize(g: &GameView, m: &RankMap) -> Result<Strategy, StrategyError> {
    if !m.satisfiable() {
        return Err(StrategyError::Unsatisfiable);
    }
    let a = &g.automaton;
    let max = g.max_constant();
    let graph = RegionGraph::build(a, max)?;
    let mut moves = BTreeMap::new();
    let mut ranks = BTreeMap::new();
    for (l, r) in &graph.states {
        if GameView::region_in(&g.vfail, *l, r) {
            continue;
        }
        let rk = m.rank_of(*l, &r.to_zone().sample());
        ranks.insert((*l, r.clone()), rk);
        moves.insert((*l, r.clone()), choose(g, m, *l, r, rk));
    }
    Ok(Strategy { max, moves, ranks, game: g.clone() })
}

fn choose(g: &GameView, m: &RankMap, l: usize, r: &Region, rk: Rank) -> Move {
    let chain = r.delay_chain();
    let maximal = Move::WaitMaximal { target: chain.last().expect("non-empty").clone() };
    let Some(lower) = m.below(rk) else {
        return maximal;
    };
    let a = &g.automaton;
    for c in &chain {
        for (k, e) in a.edges_from(l) {
            if !g.is_controllable(e.action) || !e.guard.contains(&c.to_zone().sample()) {
                continue;
            }
            if reset_choices(a, k).iter().any(|x| GameView::region_in(lower, e.dst, &c.reset(x))) {
                return Move::Play { target: c.clone(), edge: k };
            }
        }
        if GameView::region_in(lower, l, c) {
            return Move::Wait { target: c.clone() };
        }
    }
    maximal
}
