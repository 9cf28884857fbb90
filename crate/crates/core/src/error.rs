use thiserror::Error;

use crate::wire::DecodeError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("randomness source failed: {0}")]
    Rng(String),

    #[error("pairing suite check failed: {0}")]
    Suite(&'static str),

    #[error("invalid group public key: {0}")]
    InvalidGroupKey(&'static str),

    #[error("key does not match the group public key: {0}")]
    KeyMismatch(&'static str),

    #[error("join request proof of knowledge does not verify")]
    InvalidJoinProof,

    #[error("member {0} is already registered")]
    DuplicateMember(String),

    #[error("credential element A is already registered to member {0}")]
    DuplicateCredential(String),

    #[error("could not sample an unused credential after {0} attempts")]
    IssueExhausted(usize),

    #[error("issued credential fails the pairing check")]
    InvalidCredential,

    #[error("group signature does not verify")]
    InvalidSignature,

    #[error("event identifier must not be empty")]
    EmptyEvent,

    #[error("event {0} appears more than once in the schedule")]
    DuplicateEvent(String),

    #[error(transparent)]
    Decode(#[from] DecodeError),
}
