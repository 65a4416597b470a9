//! Exact backtracking search for (m, a)-ovoids.  Generators act as
//! constraints: each must end up containing exactly m chosen a-spaces.
//! The search propagates forced choices (a generator that can only just
//! reach m takes all its free candidates) and forced exclusions (a full
//! generator bans its remaining candidates), branches on the generator
//! with the fewest free candidates, and excludes each tried candidate from
//! the rest of its branch node, so every solution is visited exactly once.
//! Candidate order is canonical enumeration order throughout, making
//! witnesses deterministic.

use super::{SetError, SubspaceSet};
use crate::geometry::{subspaces_within, PolarSpace};

const FREE: u8 = 0;
const CHOSEN: u8 = 1;
const BANNED: u8 = 2;

#[derive(Clone, Copy)]
enum Op {
    Choose(u32),
    Ban(u32),
}

enum Stop {
    Budget,
    Enough,
}

struct Search {
    m: u32,
    /// generator -> sorted candidate indices inside it
    gens: Vec<Vec<u32>>,
    /// candidate -> generator indices through it
    cand_gens: Vec<Vec<u32>>,
    state: Vec<u8>,
    cnt: Vec<u32>,
    free: Vec<u32>,
    /// number of generators with cnt < m
    unsatisfied: usize,
    trail: Vec<Op>,
    queue: Vec<u32>,
    nodes: u64,
    budget: u64,
    solutions: Vec<Vec<usize>>,
    want: usize,
}

impl Search {
    fn bump(&mut self, g: u32) {
        if self.cnt[g as usize] == self.m - 1 {
            self.unsatisfied -= 1;
        }
        self.cnt[g as usize] += 1;
    }

    fn unbump(&mut self, g: u32) {
        self.cnt[g as usize] -= 1;
        if self.cnt[g as usize] == self.m - 1 {
            self.unsatisfied += 1;
        }
    }

    fn choose(&mut self, c: u32) {
        debug_assert_eq!(self.state[c as usize], FREE);
        self.state[c as usize] = CHOSEN;
        for gi in 0..self.cand_gens[c as usize].len() {
            let g = self.cand_gens[c as usize][gi];
            self.bump(g);
            self.free[g as usize] -= 1;
            self.queue.push(g);
        }
        self.trail.push(Op::Choose(c));
    }

    fn ban(&mut self, c: u32) {
        debug_assert_eq!(self.state[c as usize], FREE);
        self.state[c as usize] = BANNED;
        for gi in 0..self.cand_gens[c as usize].len() {
            let g = self.cand_gens[c as usize][gi];
            self.free[g as usize] -= 1;
            self.queue.push(g);
        }
        self.trail.push(Op::Ban(c));
    }

    fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Op::Choose(c) => {
                    self.state[c as usize] = FREE;
                    for gi in 0..self.cand_gens[c as usize].len() {
                        let g = self.cand_gens[c as usize][gi];
                        self.unbump(g);
                        self.free[g as usize] += 1;
                    }
                }
                Op::Ban(c) => {
                    self.state[c as usize] = FREE;
                    for gi in 0..self.cand_gens[c as usize].len() {
                        let g = self.cand_gens[c as usize][gi];
                        self.free[g as usize] += 1;
                    }
                }
            }
        }
    }

    /// Process the queue of touched generators to a fixpoint; false means
    /// some generator can no longer reach exactly m.
    fn propagate(&mut self) -> bool {
        while let Some(g) = self.queue.pop() {
            let (cnt, free) = (self.cnt[g as usize], self.free[g as usize]);
            if cnt > self.m || cnt + free < self.m {
                self.queue.clear();
                return false;
            }
            if cnt < self.m && cnt + free == self.m {
                // Every free candidate of g is forced in.
                for ci in 0..self.gens[g as usize].len() {
                    let c = self.gens[g as usize][ci];
                    if self.state[c as usize] == FREE {
                        self.choose(c);
                    }
                }
            } else if cnt == self.m && free > 0 {
                // g is full: its free candidates can never be chosen.
                for ci in 0..self.gens[g as usize].len() {
                    let c = self.gens[g as usize][ci];
                    if self.state[c as usize] == FREE {
                        self.ban(c);
                    }
                }
            }
        }
        true
    }

    /// Generator with cnt < m and the fewest free candidates.
    fn select(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for g in 0..self.gens.len() {
            if self.cnt[g] < self.m {
                let key = self.free[g];
                if best.is_none_or(|(k, _)| key < k) {
                    best = Some((key, g));
                }
            }
        }
        best.map(|(_, g)| g)
    }

    /// Binary branching on one candidate of the most constrained generator:
    /// solutions split exactly into those choosing it and those excluding
    /// it, so every solution is visited once.
    fn recurse(&mut self) -> Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Stop::Budget);
        }
        if self.unsatisfied == 0 {
            let solution: Vec<usize> =
                (0..self.state.len()).filter(|&c| self.state[c] == CHOSEN).collect();
            self.solutions.push(solution);
            if self.solutions.len() >= self.want {
                return Err(Stop::Enough);
            }
            return Ok(());
        }
        let Some(g) = self.select() else { return Ok(()) };
        let Some(&c) = self.gens[g].iter().find(|&&c| self.state[c as usize] == FREE) else {
            return Ok(());
        };
        let mark = self.trail.len();
        self.choose(c);
        let result = if self.propagate() { self.recurse() } else { Ok(()) };
        self.rollback(mark);
        result?;
        self.ban(c);
        let result = if self.propagate() { self.recurse() } else { Ok(()) };
        self.rollback(mark);
        result
    }
}

fn run_search(
    space: &PolarSpace,
    a: u16,
    m: u64,
    budget: u64,
    want: usize,
) -> Result<(Vec<Vec<usize>>, u64, bool), SetError> {
    let d = space.rank();
    if a == 0 || a >= d {
        return Err(SetError::WrongDimension { expected: d - 1, got: a });
    }
    let candidates = space.enumerate_isotropic(a)?;
    let ncand = candidates.len();
    if m > ncand as u64 {
        return Ok((Vec::new(), 0, true));
    }
    let field = space.field();
    let generators = space.enumerate_isotropic(d)?;
    let mut gens = Vec::with_capacity(generators.len());
    let mut cand_gens = vec![Vec::new(); ncand];
    for (gi, g) in generators.iter().enumerate() {
        let mut inside = Vec::new();
        for sub in subspaces_within(field, g, a) {
            let idx = space
                .index_of(&sub)?
                .expect("subspaces of a totally isotropic space are totally isotropic");
            inside.push(idx as u32);
            cand_gens[idx].push(gi as u32);
        }
        inside.sort_unstable();
        gens.push(inside);
    }

    let m32 = m as u32;
    let free: Vec<u32> = gens.iter().map(|g| g.len() as u32).collect();
    let unsatisfied = if m32 == 0 { 0 } else { gens.len() };
    let mut search = Search {
        m: m32,
        queue: (0..gens.len() as u32).collect(),
        gens,
        cand_gens,
        state: vec![FREE; ncand],
        cnt: vec![0; free.len()],
        free,
        unsatisfied,
        trail: Vec::new(),
        nodes: 0,
        budget,
        solutions: Vec::new(),
        want,
    };
    if !search.propagate() {
        return Ok((Vec::new(), 0, true));
    }
    match search.recurse() {
        Ok(()) => Ok((search.solutions, search.nodes, true)),
        Err(Stop::Enough) => Ok((search.solutions, search.nodes, false)),
        Err(Stop::Budget) => Err(SetError::BudgetExceeded { nodes: search.nodes }),
    }
}

/// Find one (m, a)-ovoid, or certify that none exists.  `Ok(None)` is an
/// exhaustion verdict; running out of budget is an error, never a silent
/// "none".
pub fn search_m_ovoid(
    space: &PolarSpace,
    a: u16,
    m: u64,
    budget: u64,
) -> Result<Option<SubspaceSet>, SetError> {
    let (solutions, _, _) = run_search(space, a, m, budget, 1)?;
    Ok(solutions.into_iter().next().map(|indices| {
        SubspaceSet::from_indices(
            space,
            a,
            &indices,
            Some(format!("search witness: ({m}, {a})-ovoid")),
        )
    }))
}

/// Exhaustively enumerate all (m, a)-ovoids.  Fails with BudgetExceeded if
/// either the node budget runs out or more than `cap` solutions exist, so a
/// returned list is always complete.
pub fn search_all_m_ovoids(
    space: &PolarSpace,
    a: u16,
    m: u64,
    budget: u64,
    cap: usize,
) -> Result<Vec<SubspaceSet>, SetError> {
    let (solutions, nodes, complete) = run_search(space, a, m, budget, cap.saturating_add(1))?;
    if !complete {
        return Err(SetError::BudgetExceeded { nodes });
    }
    Ok(solutions
        .into_iter()
        .enumerate()
        .map(|(i, indices)| {
            SubspaceSet::from_indices(
                space,
                a,
                &indices,
                Some(format!("search witness {i}: ({m}, {a})-ovoid")),
            )
        })
        .collect())
}
