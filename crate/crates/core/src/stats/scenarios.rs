use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Approximate number of winning standings scenarios for one team:
/// `(teams!)^categories / teams`, computed exactly.
///
/// Every category can be ordered `teams!` ways and, by symmetry, each team
/// wins in roughly one `teams`-th of the joint orderings.
pub fn scenario_count(teams: u32, categories: u32) -> Result<BigUint> {
    if teams < 2 {
        return Err(Error::validation("scenario count needs at least 2 teams"));
    }
    if categories < 1 {
        return Err(Error::validation("scenario count needs at least 1 category"));
    }
    let factorial: BigUint = (1..=teams).map(BigUint::from).product();
    Ok(factorial.pow(categories) / BigUint::from(teams))
}
