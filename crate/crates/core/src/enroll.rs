//! Join/Issue and the issuer's registration table.
//!
//! The OBU proves knowledge of `y` behind `z = h^y` with a Schnorr proof
//! `(z, c, s)`; the issuer answers with `(x, A)` where
//! `A = (g1·z⁻¹)^(1/(γ+x))` and records the row under the member id.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{CryptoRng, RngCore};
use thiserror::Error as ThisError;

use crate::algebra::{pairing, G1Element, Scalar};
use crate::error::Error;
use crate::keys::{GroupPublicKey, MasterIssuingKey, UserKeyPair};
use crate::wire::{DecodeError, HashItem, Reader, Writer};

/// Attempts at drawing `x` before `issue` gives up (`γ + x = 0` or a
/// colliding `A` both have negligible probability).
pub const ISSUE_ATTEMPTS: usize = 8;

/// Issuer-chosen opaque identifier (e.g. a vehicle registration).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemberId(Vec<u8>);

impl MemberId {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Self {
        MemberId(bytes.into())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl From<&str> for MemberId {
    fn from(s: &str) -> Self {
        MemberId(s.as_bytes().to_vec())
    }
}

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match std::str::from_utf8(&self.0) {
            Ok(s) if s.chars().all(|c| !c.is_control()) => f.write_str(s),
            _ => write!(f, "0x{}", hex::encode(&self.0)),
        }
    }
}

impl fmt::Debug for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MemberId({self})")
    }
}

/// `(z, c, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinRequest {
    pub z: G1Element,
    pub c: Scalar,
    pub s: Scalar,
}

/// `(x, A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IssueResponse {
    pub x: Scalar,
    pub a: G1Element,
}

/// Member credential `(x, y, A)`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupSigningKey {
    pub x: Scalar,
    pub y: Scalar,
    pub a: G1Element,
}

impl GroupSigningKey {
    /// `ê(A, g2^x·w) = ê(g1·h^(−y), g2)`.
    pub fn is_valid(&self, gpk: &GroupPublicKey) -> bool {
        let z = gpk.h.pow(&self.y);
        credential_equation_holds(gpk, &self.x, &self.a, &z)
    }
}

impl fmt::Debug for GroupSigningKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupSigningKey")
            .field("a", &self.a)
            .finish_non_exhaustive()
    }
}

fn credential_equation_holds(gpk: &GroupPublicKey, x: &Scalar, a: &G1Element, z: &G1Element) -> bool {
    if a.is_identity() {
        return false;
    }
    pairing(a, &(gpk.g2.pow(x) * gpk.w)) == pairing(&(gpk.g1 / *z), &gpk.g2)
}

/// What the joining OBU keeps between its two protocol messages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinState {
    pub upk: G1Element,
}

impl JoinState {
    /// Completes the join, checking that the keys are the ones that started it.
    pub fn finish(
        self,
        gpk: &GroupPublicKey,
        keys: &UserKeyPair,
        resp: &IssueResponse,
    ) -> Result<GroupSigningKey, Error> {
        if keys.upk != self.upk {
            return Err(Error::KeyMismatch("join finished with different user keys"));
        }
        join_finish(gpk, keys, resp)
    }
}

/// OBU side, first move: `c = H2(h, z, h^r)`, `s = r + c·y`.
pub fn join_start<R: RngCore + CryptoRng>(
    gpk: &GroupPublicKey,
    keys: &UserKeyPair,
    rng: &mut R,
) -> Result<(JoinRequest, JoinState), Error> {
    let r = Scalar::random(rng)?;
    let z = keys.upk;
    let commitment = gpk.h.pow(&r);
    let c = gpk.challenge(&[HashItem::G1(&gpk.h), HashItem::G1(&z), HashItem::G1(&commitment)]);
    let s = r + c * keys.usk;
    Ok((JoinRequest { z, c, s }, JoinState { upk: z }))
}

/// Checks the join proof: `c = H2(h, z, h^s·z^(−c))`.
pub fn verify_join_request(gpk: &GroupPublicKey, req: &JoinRequest) -> bool {
    if req.z.is_identity() {
        return false;
    }
    let commitment = gpk.h.pow(&req.s) / req.z.pow(&req.c);
    let c = gpk.challenge(&[HashItem::G1(&gpk.h), HashItem::G1(&req.z), HashItem::G1(&commitment)]);
    c == req.c
}

/// Issuer side: verify the proof, pick `x`, compute `A` and register the
/// member. The table is only touched on success.
pub fn issue<R: RngCore + CryptoRng>(
    gpk: &GroupPublicKey,
    mik: &MasterIssuingKey,
    reg: &mut RegistrationTable,
    member: &MemberId,
    req: &JoinRequest,
    rng: &mut R,
) -> Result<IssueResponse, Error> {
    if reg.contains(member) {
        return Err(Error::DuplicateMember(member.to_string()));
    }
    if !verify_join_request(gpk, req) {
        return Err(Error::InvalidJoinProof);
    }
    let base = gpk.g1 / req.z;
    for _ in 0..ISSUE_ATTEMPTS {
        let x = Scalar::random(rng)?;
        let Some(exponent) = (mik.gamma + x).invert() else {
            continue;
        };
        let a = base.pow(&exponent);
        if reg.lookup_by_a(&a).is_some() {
            continue;
        }
        reg.insert(member.clone(), RegistrationRow { x, a, upk: req.z })?;
        return Ok(IssueResponse { x, a });
    }
    Err(Error::IssueExhausted(ISSUE_ATTEMPTS))
}

/// OBU side, last move: accept `(x, A)` only if
/// `ê(A, g2^x·w) = ê(g1·z⁻¹, g2)`.
pub fn join_finish(gpk: &GroupPublicKey, keys: &UserKeyPair, resp: &IssueResponse) -> Result<GroupSigningKey, Error> {
    if !credential_equation_holds(gpk, &resp.x, &resp.a, &keys.upk) {
        return Err(Error::InvalidCredential);
    }
    Ok(GroupSigningKey {
        x: resp.x,
        y: keys.usk,
        a: resp.a,
    })
}

// ---------------------------------------------------------------------------
// Registration table
// ---------------------------------------------------------------------------

/// `reg[i] = (x, A)`, plus the member's `upk` for judging.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistrationRow {
    pub x: Scalar,
    pub a: G1Element,
    pub upk: G1Element,
}

/// Rows keyed by member id with an inverse index on `A`.
///
/// Single-writer: mutation needs `&mut self`, and callers sharing a table
/// across processes must serialise writers themselves.
#[derive(Clone, Debug, Default)]
pub struct RegistrationTable {
    rows: BTreeMap<MemberId, RegistrationRow>,
    index_by_a: HashMap<[u8; 48], MemberId>,
}

impl PartialEq for RegistrationTable {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Eq for RegistrationTable {}

const REG_MAGIC: &[u8; 6] = b"AEEREG";
const REG_VERSION: u8 = 1;

#[derive(Clone, Debug, PartialEq, Eq, ThisError)]
pub enum RegistryError {
    #[error("not a registration table (bad magic)")]
    Magic,
    #[error("unsupported registration table version {0}")]
    Version(u8),
    #[error("header: {0}")]
    Header(DecodeError),
    #[error("row {row}: {source}")]
    Row { row: usize, source: DecodeError },
    #[error("row {row}: empty member id")]
    EmptyId { row: usize },
    #[error("row {row}: member {member} appears twice")]
    DuplicateMember { row: usize, member: String },
    #[error("row {row}: credential A of {member} is already registered to {existing}")]
    DuplicateCredential { row: usize, member: String, existing: String },
    #[error("{0} trailing bytes after the last row")]
    Trailing(usize),
}

impl RegistrationTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, member: &MemberId) -> bool {
        self.rows.contains_key(member)
    }

    pub fn get(&self, member: &MemberId) -> Option<&RegistrationRow> {
        self.rows.get(member)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MemberId, &RegistrationRow)> {
        self.rows.iter()
    }

    /// O(1) lookup of the member holding credential element `A`.
    pub fn lookup_by_a(&self, a: &G1Element) -> Option<&MemberId> {
        self.index_by_a.get(&a.to_compressed())
    }

    /// Adds a new member. Fails on a duplicate id or a duplicate `A`.
    pub fn insert(&mut self, member: MemberId, row: RegistrationRow) -> Result<(), Error> {
        if self.rows.contains_key(&member) {
            return Err(Error::DuplicateMember(member.to_string()));
        }
        self.write_row(member, row)
    }

    /// Sets `reg[member] := row`, replacing any existing row for that
    /// member. The index stays an exact inverse: the old `A` is dropped and
    /// an `A` owned by a different member is refused.
    pub fn write_row(&mut self, member: MemberId, row: RegistrationRow) -> Result<(), Error> {
        let key = row.a.to_compressed();
        if let Some(owner) = self.index_by_a.get(&key) {
            if *owner != member {
                return Err(Error::DuplicateCredential(owner.to_string()));
            }
        }
        if let Some(old) = self.rows.insert(member.clone(), row) {
            self.index_by_a.remove(&old.a.to_compressed());
        }
        self.index_by_a.insert(key, member);
        Ok(())
    }

    /// `magic ‖ version ‖ u32 row count`, then per row
    /// `u32 id length ‖ id ‖ x ‖ A ‖ upk` (scalars big-endian, points compressed).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::default();
        w.bytes(REG_MAGIC);
        w.bytes(&[REG_VERSION]);
        w.u32(u32::try_from(self.rows.len()).expect("row count fits in u32"));
        for (member, row) in &self.rows {
            w.var_bytes(member.as_bytes());
            w.scalar(&row.x);
            w.g1(&row.a);
            w.g1(&row.upk);
        }
        w.0
    }

    /// Parses [`to_bytes`](Self::to_bytes) output, rebuilding the index and
    /// re-checking every invariant. Nothing is returned unless the whole
    /// input is valid.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, RegistryError> {
        let mut r = Reader::new(bytes);
        let magic = r.take(REG_MAGIC.len()).map_err(|_| RegistryError::Magic)?;
        if magic != REG_MAGIC {
            return Err(RegistryError::Magic);
        }
        let version = r.u8().map_err(RegistryError::Header)?;
        if version != REG_VERSION {
            return Err(RegistryError::Version(version));
        }
        let count = r.u32().map_err(RegistryError::Header)? as usize;

        let mut table = RegistrationTable::new();
        for row in 0..count {
            let at = |source| RegistryError::Row { row, source };
            let member = MemberId(r.var_bytes().map_err(at)?);
            let x = r.nonzero_scalar("x").map_err(at)?;
            let a = r.g1("A").map_err(at)?;
            let upk = r.g1("upk").map_err(at)?;
            if member.as_bytes().is_empty() {
                return Err(RegistryError::EmptyId { row });
            }
            if table.contains(&member) {
                return Err(RegistryError::DuplicateMember {
                    row,
                    member: member.to_string(),
                });
            }
            if let Some(existing) = table.lookup_by_a(&a) {
                return Err(RegistryError::DuplicateCredential {
                    row,
                    member: member.to_string(),
                    existing: existing.to_string(),
                });
            }
            table
                .write_row(member, RegistrationRow { x, a, upk })
                .expect("duplicates were checked above");
        }
        match r.remaining() {
            0 => {}
            n => return Err(RegistryError::Trailing(n)),
        }
        Ok(table)
    }

    /// Writes the table to `out`.
    pub fn save<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(&self.to_bytes())
    }

    /// Reads a table from `input`.
    pub fn load<R: std::io::Read>(mut input: R) -> std::io::Result<Result<Self, RegistryError>> {
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        Ok(Self::from_bytes(&bytes))
    }

    #[cfg(test)]
    fn index_is_exact_inverse(&self) -> bool {
        self.index_by_a.len() == self.rows.len()
            && self
                .rows
                .iter()
                .all(|(id, row)| self.index_by_a.get(&row.a.to_compressed()) == Some(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BilinearSuite;
    use crate::keys::{gset, ukg, MasterOpeningKey};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    struct Fixture {
        gpk: GroupPublicKey,
        mik: MasterIssuingKey,
        _mok: MasterOpeningKey,
        rng: ChaCha20Rng,
    }

    fn fixture(seed: u64) -> Fixture {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (gpk, mik, mok) = gset(&mut rng, &BilinearSuite::bls12_381()).unwrap();
        Fixture { gpk, mik, _mok: mok, rng }
    }

    #[test]
    fn honest_round_trip() {
        let mut f = fixture(10);
        let mut reg = RegistrationTable::new();
        let keys = ukg(&mut f.rng, &f.gpk).unwrap();
        let (req, state) = join_start(&f.gpk, &keys, &mut f.rng).unwrap();
        let id = MemberId::from("veh-1");
        let resp = issue(&f.gpk, &f.mik, &mut reg, &id, &req, &mut f.rng).unwrap();
        assert_eq!(
            pairing(&resp.a, &(f.gpk.g2.pow(&resp.x) * f.gpk.w)),
            pairing(&(f.gpk.g1 / keys.upk), &f.gpk.g2)
        );
        let gsk = state.finish(&f.gpk, &keys, &resp).unwrap();
        assert!(gsk.is_valid(&f.gpk));
        assert_eq!(reg.lookup_by_a(&gsk.a), Some(&id));
        assert_eq!(reg.get(&id).unwrap().upk, keys.upk);
    }

    #[test]
    fn tampered_requests_are_rejected() {
        let mut f = fixture(11);
        let mut reg = RegistrationTable::new();
        let keys = ukg(&mut f.rng, &f.gpk).unwrap();
        let other = ukg(&mut f.rng, &f.gpk).unwrap();
        let (req, _) = join_start(&f.gpk, &keys, &mut f.rng).unwrap();

        let mut bad = req.clone();
        bad.s = bad.s + Scalar::one();
        assert!(matches!(
            issue(&f.gpk, &f.mik, &mut reg, &"a".into(), &bad, &mut f.rng),
            Err(Error::InvalidJoinProof)
        ));

        let mut bad = req.clone();
        bad.c = bad.c + Scalar::one();
        assert!(!verify_join_request(&f.gpk, &bad));

        let mut bad = req.clone();
        bad.z = other.upk;
        assert!(!verify_join_request(&f.gpk, &bad));

        let mut bad = req;
        bad.z = G1Element::identity();
        assert!(!verify_join_request(&f.gpk, &bad));
        assert!(reg.is_empty());
    }

    #[test]
    fn duplicate_member_is_a_conflict() {
        let mut f = fixture(12);
        let mut reg = RegistrationTable::new();
        let keys = ukg(&mut f.rng, &f.gpk).unwrap();
        let (req, _) = join_start(&f.gpk, &keys, &mut f.rng).unwrap();
        let id = MemberId::from("veh-1");
        issue(&f.gpk, &f.mik, &mut reg, &id, &req, &mut f.rng).unwrap();
        let err = issue(&f.gpk, &f.mik, &mut reg, &id, &req, &mut f.rng).unwrap_err();
        assert!(matches!(err, Error::DuplicateMember(_)));
        assert_eq!(reg.len(), 1);
    }

    #[test]
    fn tampered_responses_are_rejected() {
        let mut f = fixture(13);
        let mut reg = RegistrationTable::new();
        let keys = ukg(&mut f.rng, &f.gpk).unwrap();
        let (req, _) = join_start(&f.gpk, &keys, &mut f.rng).unwrap();
        let resp = issue(&f.gpk, &f.mik, &mut reg, &"v".into(), &req, &mut f.rng).unwrap();

        let mut bad = resp.clone();
        bad.a = bad.a * G1Element::random(&mut f.rng).unwrap();
        assert!(matches!(join_finish(&f.gpk, &keys, &bad), Err(Error::InvalidCredential)));

        let mut bad = resp.clone();
        bad.x = bad.x + Scalar::one();
        assert!(matches!(join_finish(&f.gpk, &keys, &bad), Err(Error::InvalidCredential)));

        let other = ukg(&mut f.rng, &f.gpk).unwrap();
        assert!(join_finish(&f.gpk, &other, &resp).is_err());
    }

    #[test]
    fn join_proof_single_field_fuzz() {
        let mut f = fixture(14);
        let keys = ukg(&mut f.rng, &f.gpk).unwrap();
        for _ in 0..200 {
            let (req, _) = join_start(&f.gpk, &keys, &mut f.rng).unwrap();
            assert!(verify_join_request(&f.gpk, &req));
            let mut bad = req.clone();
            match f.rng.gen_range(0..3) {
                0 => bad.z = bad.z * G1Element::random(&mut f.rng).unwrap(),
                1 => bad.c = bad.c + Scalar::random(&mut f.rng).unwrap(),
                _ => bad.s = bad.s + Scalar::random(&mut f.rng).unwrap(),
            }
            assert!(!verify_join_request(&f.gpk, &bad));
        }
    }

    fn synthetic_table(rng: &mut ChaCha20Rng, n: usize) -> RegistrationTable {
        let mut reg = RegistrationTable::new();
        for i in 0..n {
            let row = RegistrationRow {
                x: Scalar::random(rng).unwrap(),
                a: G1Element::random(rng).unwrap(),
                upk: G1Element::random(rng).unwrap(),
            };
            reg.insert(MemberId::new(format!("m{i}")), row).unwrap();
        }
        reg
    }

    #[test]
    fn lookup_by_a_over_ten_thousand_members() {
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        let reg = synthetic_table(&mut rng, 10_000);
        for (id, row) in reg.iter() {
            assert_eq!(reg.lookup_by_a(&row.a), Some(id));
        }
        assert_eq!(reg.lookup_by_a(&G1Element::random(&mut rng).unwrap()), None);
        assert!(reg.index_is_exact_inverse());
    }

    #[test]
    fn write_row_keeps_index_exact() {
        let mut rng = ChaCha20Rng::seed_from_u64(16);
        let mut reg = synthetic_table(&mut rng, 4);
        let a_of_m1 = reg.get(&"m1".into()).unwrap().a;
        let replacement = RegistrationRow {
            x: Scalar::from_u64(3),
            a: G1Element::random(&mut rng).unwrap(),
            upk: G1Element::generator(),
        };
        reg.write_row("m1".into(), replacement.clone()).unwrap();
        assert_eq!(reg.lookup_by_a(&a_of_m1), None);
        assert_eq!(reg.lookup_by_a(&replacement.a), Some(&"m1".into()));

        let stolen = RegistrationRow {
            a: reg.get(&"m2".into()).unwrap().a,
            ..replacement
        };
        assert!(matches!(reg.write_row("m3".into(), stolen), Err(Error::DuplicateCredential(_))));
        assert!(reg.index_is_exact_inverse());
    }

    #[test]
    fn persistence_round_trip_and_corruption() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let reg = synthetic_table(&mut rng, 25);
        let bytes = reg.to_bytes();
        let back = RegistrationTable::from_bytes(&bytes).unwrap();
        assert_eq!(back, reg);
        assert!(back.index_is_exact_inverse());
        assert_eq!(back.to_bytes(), bytes);

        let mut via_io = Vec::new();
        reg.save(&mut via_io).unwrap();
        assert_eq!(RegistrationTable::load(&via_io[..]).unwrap().unwrap(), reg);

        for cut in 0..bytes.len() {
            assert!(RegistrationTable::from_bytes(&bytes[..cut]).is_err(), "prefix {cut} accepted");
        }
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(matches!(RegistrationTable::from_bytes(&extra), Err(RegistryError::Trailing(1))));
    }

    #[test]
    fn load_reports_row_of_damage() {
        let mut rng = ChaCha20Rng::seed_from_u64(18);
        let reg = synthetic_table(&mut rng, 3);
        let mut bytes = reg.to_bytes();
        // Row 1 starts after the header (11 bytes) and row 0 (4 + 2 + 32 + 48 + 48).
        let row1 = 11 + 134;
        bytes[row1 + 4 + 2] = 0xff; // first byte of x, now ≥ p
        match RegistrationTable::from_bytes(&bytes) {
            Err(RegistryError::Row { row: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn load_rejects_duplicate_a() {
        let mut rng = ChaCha20Rng::seed_from_u64(19);
        let reg = synthetic_table(&mut rng, 2);
        let mut bytes = reg.to_bytes();
        // Copy row 0's A over row 1's A.
        let a0 = 11 + 4 + 2 + 32;
        let a1 = 11 + 134 + 4 + 2 + 32;
        let a = bytes[a0..a0 + 48].to_vec();
        bytes[a1..a1 + 48].copy_from_slice(&a);
        assert!(matches!(
            RegistrationTable::from_bytes(&bytes),
            Err(RegistryError::DuplicateCredential { row: 1, .. })
        ));
    }
}
