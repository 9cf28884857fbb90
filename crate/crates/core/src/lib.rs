//! Anonymous, event-linkable group signatures for vehicle-to-vehicle
//! messaging, on BLS12-381.
//!
//! A vehicle joins the group once and then, for every event (an
//! intersection crossing, a ten-minute time slot, ...), sends one group
//! signature followed by cheap event signatures under the token `T` that
//! the group signature exposed. Two signatures from the same vehicle for
//! the same event carry the same `T`, so Sybil identities are detectable,
//! while signatures for different events are unlinkable. An opening
//! authority can trace any valid signature back to the enrolled member and
//! prove it publicly.
//!
//! ```
//! use aee_core::prelude::*;
//! use rand::SeedableRng;
//!
//! let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(7);
//! let (gpk, mik, mok) = gset(&mut rng, &BilinearSuite::bls12_381()).unwrap();
//!
//! let keys = ukg(&mut rng, &gpk).unwrap();
//! let mut reg = RegistrationTable::new();
//! let (req, state) = join_start(&gpk, &keys, &mut rng).unwrap();
//! let resp = issue(&gpk, &mik, &mut reg, &MemberId::from("veh-1"), &req, &mut rng).unwrap();
//! let gsk = state.finish(&gpk, &keys, &resp).unwrap();
//!
//! let ctx = precompute_context(&gpk, &gsk);
//! let et: EventId = "201703011000".parse().unwrap();
//! let sigma = gsign(&gpk, &gsk, &ctx, &et, b"enter", &mut rng).unwrap();
//! assert!(gver(&gpk, &et, b"enter", &sigma));
//!
//! let epk = epk_from_signature(&gpk, &et, &sigma);
//! let cam = esign(&gpk, &keys.usk, &et, &epk, b"speed=12", &mut rng).unwrap();
//! assert!(ever(&gpk, &et, &epk, b"speed=12", &cam));
//!
//! match open(&gpk, &mok, &reg, &et, b"enter", &sigma, &mut rng).unwrap() {
//!     OpenOutcome::Traced { member, proof } => {
//!         assert_eq!(member, MemberId::from("veh-1"));
//!         assert!(judge(&gpk, &member, &keys.upk, &sigma, &proof));
//!     }
//!     OpenOutcome::Untraceable => unreachable!(),
//! }
//! ```

pub mod algebra;
pub mod enroll;
pub mod error;
pub mod eventsig;
pub mod groupsig;
pub mod keys;
pub mod linktrace;
pub mod testkit;
pub mod wire;

pub use error::Error;

/// The types and functions most callers need.
pub mod prelude {
    pub use crate::algebra::{BilinearSuite, G1Element, Scalar};
    pub use crate::enroll::{
        issue, join_finish, join_start, GroupSigningKey, IssueResponse, JoinRequest, MemberId, RegistrationTable,
    };
    pub use crate::error::Error;
    pub use crate::eventsig::{epk_from_signature, esign, ever, EventPublicKey, EventSignature};
    pub use crate::groupsig::{gsign, gver, precompute_context, precompute_event_schedule, EventId, GroupSignature};
    pub use crate::keys::{gset, ukg, GroupPublicKey, MasterIssuingKey, MasterOpeningKey, UserKeyPair};
    pub use crate::linktrace::{judge, link, open, OpenOutcome, TracingProof};
    pub use crate::wire::{Mode, Wire};
}
