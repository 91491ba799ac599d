//! Two-counter machines and the matrix games that simulate them.

mod encode;
mod play;
mod program;

pub use encode::{encode_integer, encode_nonneg, EncodedMmg, NamedMatrix, Variant};
pub use play::{
    check_nonneg_punishment, run_scripted_play, EvePolicy, Factor, PlayReport, PunishmentReport, TurnRecord,
};
pub use program::{Configuration, Counter, Instruction, MachineTransition, TransitionKind, TwoCounterMachine};
