use super::{Agent, DraftContext, DraftState};
use crate::error::{Error, Result};

/// Seat making global pick `pick` in a snake draft of `teams` seats.
pub fn seat_for_pick(pick: usize, teams: usize) -> usize {
    let round = pick / teams;
    let slot = pick % teams;
    if round.is_multiple_of(2) {
        slot
    } else {
        teams - 1 - slot
    }
}

/// Runs a full snake draft with one agent per seat.
///
/// Every agent is deterministic, so the draft needs no randomness.
pub fn run_draft(agents: &[Agent], ctx: &DraftContext) -> Result<DraftState> {
    let teams = ctx.config().teams;
    if agents.len() != teams {
        return Err(Error::DimensionMismatch(format!(
            "{} agents for {teams} seats",
            agents.len()
        )));
    }
    let mut draft = ctx.new_draft();
    while let Some(seat) = draft.on_the_clock() {
        let player = agents[seat].pick(ctx, &draft, seat)?;
        draft.apply(seat, player)?;
    }
    Ok(draft)
}
