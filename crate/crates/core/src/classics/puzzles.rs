use std::collections::VecDeque;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KnightTour {
    /// Squares as `(row, col)` in visiting order.
    Tour(Vec<(usize, usize)>),
    NoTour,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("board size must be between 1 and 8, got {0}")]
pub struct BoardSizeError(pub usize);

const JUMPS: [(isize, isize); 8] = [(1, 2), (2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1), (-2, 1), (-1, 2)];

fn jumps(n: usize, (r, c): (usize, usize)) -> impl Iterator<Item = (usize, usize)> {
    JUMPS.iter().filter_map(move |&(dr, dc)| {
        let (r2, c2) = (r as isize + dr, c as isize + dc);
        (r2 >= 0 && c2 >= 0 && (r2 as usize) < n && (c2 as usize) < n).then_some((r2 as usize, c2 as usize))
    })
}

pub fn is_knight_move(a: (usize, usize), b: (usize, usize)) -> bool {
    let (dr, dc) = (a.0.abs_diff(b.0), a.1.abs_diff(b.1));
    (dr, dc) == (1, 2) || (dr, dc) == (2, 1)
}

/// True iff `tour` visits every square of the `n`×`n` board once by knight
/// moves.
pub fn validate_tour(n: usize, tour: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n * n];
    for &(r, c) in tour {
        if r >= n || c >= n || std::mem::replace(&mut seen[r * n + c], true) {
            return false;
        }
    }
    tour.len() == n * n && tour.windows(2).all(|w| is_knight_move(w[0], w[1]))
}

fn extend(n: usize, path: &mut Vec<(usize, usize)>, seen: &mut [bool]) -> bool {
    if path.len() == n * n {
        return true;
    }
    let here = *path.last().expect("nonempty path");
    let onward = |sq: (usize, usize), seen: &[bool]| jumps(n, sq).filter(|&(r, c)| !seen[r * n + c]).count();
    let mut next: Vec<_> = jumps(n, here).filter(|&(r, c)| !seen[r * n + c]).collect();
    // Fewest onward moves first; ties keep the fixed jump order.
    next.sort_by_key(|&sq| onward(sq, seen));
    for (r, c) in next {
        seen[r * n + c] = true;
        path.push((r, c));
        if extend(n, path, seen) {
            return true;
        }
        path.pop();
        seen[r * n + c] = false;
    }
    false
}

/// Open knight's tour by backtracking, preferring squares with the fewest
/// onward moves. The corner is tried first, then every other start, so
/// `NoTour` means the whole search space was exhausted.
pub fn knight_tour(n: usize) -> Result<KnightTour, BoardSizeError> {
    if !(1..=8).contains(&n) {
        return Err(BoardSizeError(n));
    }
    for start in (0..n * n).map(|i| (i / n, i % n)) {
        let mut seen = vec![false; n * n];
        seen[start.0 * n + start.1] = true;
        let mut path = vec![start];
        if extend(n, &mut path, &mut seen) {
            return Ok(KnightTour::Tour(path));
        }
    }
    Ok(KnightTour::NoTour)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Item {
    Wolf,
    Goat,
    Cabbage,
}

impl Item {
    pub const ALL: [Item; 3] = [Item::Wolf, Item::Goat, Item::Cabbage];

    fn bit(self) -> u8 {
        match self {
            Item::Wolf => 2,
            Item::Goat => 4,
            Item::Cabbage => 8,
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Item::Wolf => "wolf",
            Item::Goat => "goat",
            Item::Cabbage => "cabbage",
        })
    }
}

/// Which bank everyone is on: bit set = far bank. Bit 0 is the farmer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bank(pub u8);

impl Bank {
    pub const START: Bank = Bank(0);
    pub const GOAL: Bank = Bank(15);

    fn far(self, bit: u8) -> bool {
        self.0 & bit != 0
    }

    /// Nothing gets eaten: the goat is with the farmer or alone.
    pub fn is_valid(self) -> bool {
        let farmer = self.far(1);
        let goat = self.far(Item::Goat.bit());
        goat == farmer || (self.far(Item::Wolf.bit()) != goat && self.far(Item::Cabbage.bit()) != goat)
    }

    /// The farmer crosses, optionally with an item on the same bank.
    pub fn cross(self, cargo: Option<Item>) -> Option<Bank> {
        let mut mask = 1;
        if let Some(item) = cargo {
            if self.far(item.bit()) != self.far(1) {
                return None;
            }
            mask |= item.bit();
        }
        let next = Bank(self.0 ^ mask);
        next.is_valid().then_some(next)
    }
}

/// Crossings from `from`, each `None` (farmer alone) or an item; the
/// sequence of banks visited is returned if every crossing is legal.
pub fn replay(from: Bank, plan: &[Option<Item>]) -> Option<Vec<Bank>> {
    let mut banks = vec![from];
    for &cargo in plan {
        banks.push(banks.last()?.cross(cargo)?);
    }
    Some(banks)
}

/// Shortest plan taking everything across, by breadth-first search.
pub fn river_crossing() -> Vec<Option<Item>> {
    let moves: Vec<Option<Item>> = std::iter::once(None).chain(Item::ALL.map(Some)).collect();
    let mut prev: [Option<(Bank, Option<Item>)>; 16] = [None; 16];
    let mut seen = [false; 16];
    seen[Bank::START.0 as usize] = true;
    let mut queue = VecDeque::from([Bank::START]);
    while let Some(b) = queue.pop_front() {
        if b == Bank::GOAL {
            break;
        }
        for &m in &moves {
            if let Some(n) = b.cross(m) {
                if !std::mem::replace(&mut seen[n.0 as usize], true) {
                    prev[n.0 as usize] = Some((b, m));
                    queue.push_back(n);
                }
            }
        }
    }
    let mut plan = Vec::new();
    let mut at = Bank::GOAL;
    while let Some((b, m)) = prev[at.0 as usize] {
        plan.push(m);
        at = b;
    }
    plan.reverse();
    plan
}
