#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BankerError {
    #[error("{loans} loans but {claims} claims")]
    LengthMismatch { loans: usize, claims: usize },
    #[error("customer {customer}: loan {loan} exceeds claim {claim}")]
    LoanExceedsClaim { customer: usize, loan: u64, claim: u64 },
    #[error("customer {customer}: claim {claim} exceeds capital {capital}")]
    ClaimExceedsCapital { customer: usize, claim: u64, capital: u64 },
    #[error("total loans {total} exceed capital {capital}")]
    Overdrawn { total: u64, capital: u64 },
    #[error("no customer {0}")]
    NoSuchCustomer(usize),
    #[error("malformed request: {0}")]
    Malformed(String),
}

/// Single-currency bank: each customer has a current loan and a maximum
/// claim it may reach before repaying everything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BankerState {
    capital: u64,
    loans: Vec<u64>,
    claims: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BankerVerdict {
    /// Customers can be served to completion in this order.
    Safe(Vec<usize>),
    Unsafe,
}

impl BankerVerdict {
    pub fn is_safe(&self) -> bool {
        matches!(self, BankerVerdict::Safe(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Request {
    Granted(BankerState),
    Deferred,
}

impl BankerState {
    pub fn new(capital: u64, loans: Vec<u64>, claims: Vec<u64>) -> Result<Self, BankerError> {
        if loans.len() != claims.len() {
            return Err(BankerError::LengthMismatch { loans: loans.len(), claims: claims.len() });
        }
        for (customer, (&loan, &claim)) in loans.iter().zip(&claims).enumerate() {
            if loan > claim {
                return Err(BankerError::LoanExceedsClaim { customer, loan, claim });
            }
            if claim > capital {
                return Err(BankerError::ClaimExceedsCapital { customer, claim, capital });
            }
        }
        let total = loans.iter().try_fold(0u64, |a, &l| a.checked_add(l)).unwrap_or(u64::MAX);
        if total > capital {
            return Err(BankerError::Overdrawn { total, capital });
        }
        Ok(BankerState { capital, loans, claims })
    }

    pub fn capital(&self) -> u64 {
        self.capital
    }

    pub fn loans(&self) -> &[u64] {
        &self.loans
    }

    pub fn claims(&self) -> &[u64] {
        &self.claims
    }

    pub fn cash(&self) -> u64 {
        self.capital - self.loans.iter().sum::<u64>()
    }

    pub fn need(&self, customer: usize) -> u64 {
        self.claims[customer] - self.loans[customer]
    }

    /// Repeatedly serve the lowest-numbered customer whose remaining need
    /// fits in the cash and take back its loan. Serving a customer only
    /// increases the cash, so greed never blocks a completion order.
    pub fn is_safe(&self) -> BankerVerdict {
        let mut cash = self.cash();
        let mut finished = vec![false; self.loans.len()];
        let mut order = Vec::with_capacity(self.loans.len());
        while order.len() < self.loans.len() {
            let Some(c) = (0..self.loans.len()).find(|&c| !finished[c] && self.need(c) <= cash) else {
                return BankerVerdict::Unsafe;
            };
            finished[c] = true;
            cash += self.loans[c];
            order.push(c);
        }
        BankerVerdict::Safe(order)
    }

    /// Grant `amount` to `customer` iff the resulting state is safe.
    pub fn request(&self, customer: usize, amount: u64) -> Result<Request, BankerError> {
        if customer >= self.loans.len() {
            return Err(BankerError::NoSuchCustomer(customer));
        }
        if amount == 0 {
            return Err(BankerError::Malformed("amount must be at least 1".into()));
        }
        if amount > self.need(customer) {
            return Err(BankerError::Malformed(format!(
                "customer {customer} asks {amount} but may borrow at most {} more",
                self.need(customer)
            )));
        }
        if amount > self.cash() {
            return Err(BankerError::Malformed(format!("{amount} requested but only {} in cash", self.cash())));
        }
        let mut next = self.clone();
        next.loans[customer] += amount;
        Ok(if next.is_safe().is_safe() { Request::Granted(next) } else { Request::Deferred })
    }
}
