use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Toss {
    H,
    T,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CoinError {
    #[error("tape exhausted after {0} tosses")]
    TapeExhausted(u64),
    #[error("bias must lie strictly between 0 and 1, got {0}")]
    BadBias(f64),
    #[error("unknown toss `{0}` on tape (expected H or T)")]
    BadTape(char),
    #[error("roulette needs at least one outcome")]
    NoOutcomes,
}

#[derive(Clone, Debug)]
enum Source {
    Tape(Vec<Toss>),
    Seeded { rng: ChaCha8Rng, p: f64 },
}

/// A possibly biased coin: a fixed tape, or a seeded generator showing heads
/// with probability `p`.
#[derive(Clone, Debug)]
pub struct BiasedCoin {
    source: Source,
    consumed: u64,
}

impl BiasedCoin {
    pub fn tape(tosses: Vec<Toss>) -> Self {
        BiasedCoin { source: Source::Tape(tosses), consumed: 0 }
    }

    /// Tape from a string of `H` and `T`; commas and whitespace are skipped.
    pub fn parse_tape(text: &str) -> Result<Self, CoinError> {
        let tosses = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c.to_ascii_uppercase() {
                'H' => Ok(Toss::H),
                'T' => Ok(Toss::T),
                _ => Err(CoinError::BadTape(c)),
            })
            .collect::<Result<_, _>>()?;
        Ok(BiasedCoin::tape(tosses))
    }

    pub fn seeded(p: f64, seed: u64) -> Result<Self, CoinError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(CoinError::BadBias(p));
        }
        Ok(BiasedCoin { source: Source::Seeded { rng: ChaCha8Rng::seed_from_u64(seed), p }, consumed: 0 })
    }

    pub fn toss(&mut self) -> Result<Toss, CoinError> {
        let t = match &mut self.source {
            Source::Tape(tape) => *tape.get(self.consumed as usize).ok_or(CoinError::TapeExhausted(self.consumed))?,
            Source::Seeded { rng, p } => {
                if rng.random_bool(*p) {
                    Toss::H
                } else {
                    Toss::T
                }
            }
        };
        self.consumed += 1;
        Ok(t)
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }
}

/// An outcome and the number of tosses spent on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Draw {
    pub value: usize,
    pub tosses: u64,
}

/// Toss pairs until they differ: HT gives 0, TH gives 1.
pub fn fair_bit(coin: &mut BiasedCoin) -> Result<Draw, CoinError> {
    let start = coin.consumed();
    loop {
        match (coin.toss()?, coin.toss()?) {
            (Toss::H, Toss::T) => return Ok(Draw { value: 0, tosses: coin.consumed() - start }),
            (Toss::T, Toss::H) => return Ok(Draw { value: 1, tosses: coin.consumed() - start }),
            _ => {}
        }
    }
}

pub fn smallest_prime_at_least(n: usize) -> usize {
    let is_prime = |k: usize| k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| !k.is_multiple_of(d));
    (n.max(2)..).find(|&k| is_prime(k)).expect("primes are unbounded")
}

/// Number of left rotations taking the lexicographically least rotation of
/// `word` to `word`; `None` for a constant word.
pub fn rotation_index(word: &[bool]) -> Option<usize> {
    let q = word.len();
    if q == 0 || word.iter().all(|&b| b == word[0]) {
        return None;
    }
    let rot = |k: usize| (0..q).map(move |i| word[(i + k) % q]);
    let least = (0..q).min_by(|&a, &b| rot(a).cmp(rot(b))).expect("nonempty");
    // rotating `least` left by r gives word[least + r ..], so r = q - least.
    Some((q - least) % q)
}

/// Uniform outcome in `0..n` from a biased coin. Toss a word of prime length
/// `q >= n`; a non-constant word has exactly `q` distinct rotations (the
/// orbit size divides the prime `q` and is not 1), all with the same
/// probability, so its position in its rotation class is uniform on `0..q`.
/// Constant words and positions `>= n` are rejected.
pub fn fair_roulette(n: usize, coin: &mut BiasedCoin) -> Result<Draw, CoinError> {
    if n == 0 {
        return Err(CoinError::NoOutcomes);
    }
    if n == 1 {
        return Ok(Draw { value: 0, tosses: 0 });
    }
    let q = smallest_prime_at_least(n);
    let start = coin.consumed();
    let mut word = vec![false; q];
    loop {
        for b in word.iter_mut() {
            *b = coin.toss()? == Toss::H;
        }
        if let Some(k) = rotation_index(&word).filter(|&k| k < n) {
            return Ok(Draw { value: k, tosses: coin.consumed() - start });
        }
    }
}
