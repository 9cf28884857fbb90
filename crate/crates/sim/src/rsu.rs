//! Plain Schnorr signatures for roadside-unit messages. The RSU is public
//! infrastructure and needs authenticity only, not anonymity.

use aee_core::algebra::{hash_to_scalar, G1Element, Scalar};
use aee_core::wire::HashItem;
use aee_core::Error;
use rand::{CryptoRng, RngCore};

const RSU_TAG: &[u8] = b"AEE-RSU-v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsuSignature {
    pub c: Scalar,
    pub s: Scalar,
}

impl RsuSignature {
    pub const BYTES: usize = 2 * Scalar::BYTES;
}

pub struct RsuSigner {
    sk: Scalar,
    pub pk: G1Element,
}

fn challenge(pk: &G1Element, msg: &[u8], commitment: &G1Element) -> Scalar {
    hash_to_scalar(RSU_TAG, &[HashItem::G1(pk), HashItem::Bytes(msg), HashItem::G1(commitment)])
}

impl RsuSigner {
    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Result<Self, Error> {
        let sk = Scalar::random(rng)?;
        Ok(RsuSigner {
            sk,
            pk: G1Element::generator().pow(&sk),
        })
    }

    pub fn sign<R: RngCore + CryptoRng>(&self, msg: &[u8], rng: &mut R) -> Result<RsuSignature, Error> {
        let r = Scalar::random(rng)?;
        let c = challenge(&self.pk, msg, &G1Element::generator().pow(&r));
        Ok(RsuSignature { c, s: r + c * self.sk })
    }
}

pub fn verify(pk: &G1Element, msg: &[u8], sig: &RsuSignature) -> bool {
    let commitment = G1Element::generator().pow(&sig.s) * pk.pow(&-sig.c);
    challenge(pk, msg, &commitment) == sig.c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn sign_and_verify() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(1);
        let rsu = RsuSigner::generate(&mut rng).unwrap();
        let sig = rsu.sign(b"grant", &mut rng).unwrap();
        assert!(verify(&rsu.pk, b"grant", &sig));
        assert!(!verify(&rsu.pk, b"deny", &sig));
        let other = RsuSigner::generate(&mut rng).unwrap();
        assert!(!verify(&other.pk, b"grant", &sig));
    }
}
