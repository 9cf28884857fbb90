//! Group setup and enrollment of every simulated vehicle.

use aee_core::algebra::BilinearSuite;
use aee_core::enroll::{issue, join_start, GroupSigningKey, MemberId, RegistrationTable};
use aee_core::groupsig::{precompute_context, PairingContext};
use aee_core::keys::{gset, ukg, GroupPublicKey, MasterOpeningKey, UserKeyPair};
use rand_chacha::ChaCha20Rng;

use crate::config::SimConfig;
use crate::SimError;

pub(crate) struct Vehicle {
    pub label: String,
    pub honest: bool,
    pub keys: UserKeyPair,
    pub gsk: GroupSigningKey,
    pub ctx: PairingContext,
    /// Identities this vehicle presents in each event. Honest vehicles
    /// present exactly one.
    pub identities: Vec<String>,
}

pub(crate) struct Fleet {
    pub gpk: GroupPublicKey,
    pub mok: MasterOpeningKey,
    pub reg: RegistrationTable,
    pub vehicles: Vec<Vehicle>,
}

impl Fleet {
    /// Honest vehicles first, then attackers.
    pub fn enroll(cfg: &SimConfig, rng: &mut ChaCha20Rng) -> Result<Fleet, SimError> {
        let (gpk, mik, mok) = gset(rng, &BilinearSuite::bls12_381())?;
        let mut reg = RegistrationTable::new();
        let mut vehicles = Vec::new();
        let honest = (0..cfg.vehicle_count).map(|i| (format!("veh-{i:03}"), true));
        let attackers = (0..cfg.attacker.credentials).map(|j| (format!("atk-{j:02}"), false));
        for (label, is_honest) in honest.chain(attackers) {
            let keys = ukg(rng, &gpk)?;
            let (req, state) = join_start(&gpk, &keys, rng)?;
            let resp = issue(&gpk, &mik, &mut reg, &MemberId::new(label.clone()), &req, rng)?;
            let gsk = state.finish(&gpk, &keys, &resp)?;
            let ctx = precompute_context(&gpk, &gsk);
            let identities = if is_honest {
                vec![label.clone()]
            } else {
                (0..cfg.attacker.claimed_identities)
                    .map(|q| format!("{label}-as-{q:02}"))
                    .collect()
            };
            vehicles.push(Vehicle {
                label,
                honest: is_honest,
                keys,
                gsk,
                ctx,
                identities,
            });
        }
        Ok(Fleet {
            gpk,
            mok,
            reg,
            vehicles,
        })
    }
}
