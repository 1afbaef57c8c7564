"""Session-key exchange over B_n with a lattice-term master key.

Kati and the Bank share a master key ``h``, a generating vector of B_n
of dimension k. For each message the Bank issues a fresh random vector
``p`` of b k-ary terms; both sides compute the session key
``u = p(h)`` in B_n^b, flatten it to n*b key bits and use it with a
symmetric cipher. The reference cipher is Vernam (XOR).

Key bit order: component u_1 first, and inside a component atom 1
first. Bytes are cut from this bit stream little-endian, i.e. bit
``8m + j`` of the stream is bit ``j`` (value ``1 << j``) of byte ``m``.

Frames on the simulated channel::

    uint32 BE  total frame length, this field included
    uint8      kind: 0 TermRequest, 1 TermReply, 2 CipherBundle
    uint64 BE  session id
    payload    TermRequest: empty
               TermReply: termvec text (UTF-8)
               CipherBundle: uint32 BE block length, termvec block, ciphertext
"""

from __future__ import annotations

import logging
import struct
import threading
import warnings
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Protocol, Sequence, Tuple, Union

import numpy as np

from .errors import (
    BoolgenError,
    CapacityError,
    DomainError,
    GenerationError,
    InvalidPlaintextError,
    ProtocolError,
    TamperError,
    UnknownSessionError,
)
from .genset import GeneratingVector, is_generating, random_vector
from .lattice import LatticeElement
from .terms import SizeParams, TermVector, eval_vector, random_term_vector

logger = logging.getLogger(__name__)

SAFE_KEY_BITS = 5000

SeedLike = Union[None, int, np.random.Generator]


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class ProtocolParams:
    n: int = 1000
    k: int = 50
    b: int = 100

    def __post_init__(self):
        if min(self.n, self.k, self.b) < 1:
            raise DomainError(f"n, k, b must be positive, got {self.n}, {self.k}, {self.b}")
        if self.n * self.b < SAFE_KEY_BITS:
            warnings.warn(
                f"n*b = {self.n * self.b} key bits; below {SAFE_KEY_BITS} an adversary "
                f"guessing plaintexts at random succeeds too often",
                stacklevel=3,
            )

    @property
    def capacity(self) -> int:
        """Largest padded plaintext, in bytes."""
        return self.n * self.b // 8


@dataclass(frozen=True)
class MasterKey:
    h: GeneratingVector

    def __post_init__(self):
        if not is_generating(self.h.components, self.h.n):
            raise DomainError("a master key must be a generating vector")

    @property
    def n(self) -> int:
        return self.h.n

    @property
    def k(self) -> int:
        return self.h.k

    @classmethod
    def random(cls, n: int, k: int, seed: int = 0, max_draws: int = 10_000) -> "MasterKey":
        """First generating vector in the seeded stream of uniform draws from B_n^k."""
        for trial in range(max_draws):
            h = random_vector(n, k, seed, trial)
            if is_generating(h.components, n):
                return cls(h)
        raise GenerationError(f"no generating vector of B_{n}^{k} in {max_draws} draws")


@dataclass(frozen=True)
class SessionKey:
    u: Tuple[LatticeElement, ...]

    @property
    def n(self) -> int:
        return self.u[0].width

    @property
    def bit_length(self) -> int:
        return self.n * len(self.u)

    def to_int(self) -> int:
        n, value = self.n, 0
        for i, c in enumerate(self.u):
            value |= c.bits << (i * n)
        return value

    def keystream(self) -> bytes:
        """The key bits as whole bytes; a trailing partial byte is dropped."""
        nbytes = self.bit_length // 8
        return (self.to_int() & ((1 << (8 * nbytes)) - 1)).to_bytes(nbytes, "little")

    @classmethod
    def from_keystream(cls, key: bytes, n: int) -> "SessionKey":
        """The components fully determined by a keystream prefix."""
        value = int.from_bytes(key, "little")
        b = len(key) * 8 // n
        mask = (1 << n) - 1
        return cls(tuple(LatticeElement(n, value >> (i * n) & mask) for i in range(b)))


def derive_session_key(p: TermVector, h: Union[MasterKey, GeneratingVector, Sequence[LatticeElement]]) -> SessionKey:
    if isinstance(h, MasterKey):
        h = h.h
    comps = tuple(h)
    if p.arity != len(comps):
        raise DomainError(f"terms of arity {p.arity} with a key of dimension {len(comps)}")
    return SessionKey(eval_vector(p, comps))


# Padding with false characters

def pad(y: bytes, seed: SeedLike = None, max_length: Optional[int] = None) -> bytes:
    """Interleave ``y`` (bytes 0..127) with at least ``len(y)`` false bytes (128..255).

    False bytes are ``128 + c`` for ``c`` drawn from the bytes of ``y``
    itself so both populations share a distribution. The number of
    false bytes is uniform on ``[len(y), len(y) + ceil(len(y)/4)]``,
    clipped so the result fits in ``max_length``.
    """
    y = bytes(y)
    if any(c > 127 for c in y):
        raise DomainError("pad accepts only eligible bytes 0..127")
    rng = _rng(seed)
    m = len(y)
    hi = m + (m + 3) // 4
    if max_length is not None:
        if 2 * m > max_length:
            raise CapacityError(f"{m} bytes need {2 * m} after padding, capacity is {max_length}")
        hi = min(hi, max_length - m)
    if m == 0:
        return b""
    extra = int(rng.integers(m, hi + 1))
    total = m + extra
    out = np.empty(total, dtype=np.uint8)
    false_at = np.zeros(total, dtype=bool)
    false_at[rng.choice(total, size=extra, replace=False)] = True
    src = np.frombuffer(y, dtype=np.uint8)
    out[~false_at] = src
    out[false_at] = 128 + src[rng.integers(0, m, size=extra)]
    return out.tobytes()


def strip(x: bytes) -> bytes:
    """Drop every false byte (>= 128)."""
    return bytes(c for c in x if c < 128)


# Ciphers

class Cipher(Protocol):
    def encrypt(self, key: bytes, data: bytes) -> bytes: ...

    def decrypt(self, key: bytes, data: bytes) -> bytes: ...


def vernam_encrypt(key: bytes, x: bytes) -> bytes:
    """XOR ``x`` with the leading ``len(x)`` bytes of ``key``."""
    if len(x) > len(key):
        raise CapacityError(f"plaintext of {len(x)} bytes exceeds the {len(key)}-byte key")
    if not x:
        return b""
    mixed = int.from_bytes(x, "big") ^ int.from_bytes(key[:len(x)], "big")
    return mixed.to_bytes(len(x), "big")


vernam_decrypt = vernam_encrypt


class Vernam:
    def encrypt(self, key: bytes, data: bytes) -> bytes:
        return vernam_encrypt(key, data)

    def decrypt(self, key: bytes, data: bytes) -> bytes:
        return vernam_decrypt(key, data)


VERNAM = Vernam()


def default_validity(plaintext: bytes) -> bool:
    """Non-empty printable ASCII, tab and newline allowed."""
    return bool(plaintext) and all(32 <= c <= 126 or c in (9, 10) for c in plaintext)


# Messages and framing

@dataclass(frozen=True)
class TermRequest:
    session_id: int = 0  # ignored; the Bank assigns session ids


@dataclass(frozen=True)
class TermReply:
    session_id: int
    p: TermVector


@dataclass(frozen=True)
class CipherBundle:
    session_id: int
    p_block: bytes  # the termvec text exactly as sent
    ciphertext: bytes

    @property
    def p(self) -> TermVector:
        return TermVector.from_text(self.p_block.decode("utf-8"))


ProtocolMessage = Union[TermRequest, TermReply, CipherBundle]

_HEADER = struct.Struct(">IBQ")
_KINDS = {TermRequest: 0, TermReply: 1, CipherBundle: 2}


def encode_message(msg: ProtocolMessage) -> bytes:
    if isinstance(msg, TermRequest):
        payload = b""
    elif isinstance(msg, TermReply):
        payload = msg.p.to_text().encode("utf-8")
    else:
        payload = struct.pack(">I", len(msg.p_block)) + msg.p_block + msg.ciphertext
    return _HEADER.pack(_HEADER.size + len(payload), _KINDS[type(msg)], msg.session_id) + payload


def decode_message(frame: bytes) -> ProtocolMessage:
    if len(frame) < _HEADER.size:
        raise DomainError(f"frame of {len(frame)} bytes is shorter than the header")
    length, kind, sid = _HEADER.unpack_from(frame)
    if length != len(frame):
        raise DomainError(f"frame announces {length} bytes, got {len(frame)}")
    payload = frame[_HEADER.size:]
    if kind == 0:
        if payload:
            raise DomainError("TermRequest carries no payload")
        return TermRequest(sid)
    if kind == 1:
        return TermReply(sid, TermVector.from_text(payload.decode("utf-8")))
    if kind == 2:
        if len(payload) < 4:
            raise DomainError("truncated CipherBundle")
        (block_len,) = struct.unpack_from(">I", payload)
        if 4 + block_len > len(payload):
            raise DomainError("CipherBundle block length runs past the frame")
        return CipherBundle(sid, payload[4:4 + block_len], payload[4 + block_len:])
    raise DomainError(f"unknown message kind {kind}")


# Parties

def kati_send(
    h: Union[MasterKey, GeneratingVector],
    n: int,
    b: int,
    y: bytes,
    issued: TermReply,
    cipher: Cipher = VERNAM,
    seed: SeedLike = None,
) -> CipherBundle:
    """Pad ``y``, encrypt it under ``p(h)`` and bundle it with ``p``."""
    if issued.p.b != b:
        raise DomainError(f"issued term vector has b={issued.p.b}, expected {b}")
    key = derive_session_key(issued.p, h)
    if key.n != n:
        raise DomainError(f"session key over B_{key.n}, expected B_{n}")
    x = pad(y, seed, max_length=n * b // 8)
    return CipherBundle(issued.session_id, issued.p.to_text().encode("utf-8"), cipher.encrypt(key.keystream(), x))


def authenticate(h: Union[MasterKey, GeneratingVector], issued: TermReply) -> Tuple[LatticeElement, ...]:
    """Prover side of the authentication-only variant: send back ``p(h)``."""
    return derive_session_key(issued.p, h).u


TermStrategy = Callable[[int, int, int, GeneratingVector], TermVector]


@dataclass
class Bank:
    """Issues term vectors and receives bundles.

    Each issued session id is single use: a successful receipt or any
    rejection retires it. ``term_strategy(b, k, seed, h)`` chooses p;
    the default draws random terms and rejects those evaluating to a
    key component.
    """

    key: MasterKey
    params: ProtocolParams = field(default_factory=ProtocolParams)
    seed: int = 0
    size_params: SizeParams = field(default_factory=SizeParams)
    validity: Callable[[bytes], bool] = default_validity
    cipher: Cipher = VERNAM
    term_strategy: Optional[TermStrategy] = None

    def __post_init__(self):
        if (self.key.n, self.key.k) != (self.params.n, self.params.k):
            raise DomainError("master key shape does not match the protocol parameters")
        self._rng = np.random.default_rng([self.seed & 0xFFFFFFFFFFFFFFFF, 0xBA4C])
        self._issued: Dict[int, bytes] = {}
        self._lock = threading.Lock()
        self.dead: set = set()

    def _draw_terms(self) -> TermVector:
        term_seed = int(self._rng.integers(0, 2**63))
        if self.term_strategy is not None:
            return self.term_strategy(self.params.b, self.params.k, term_seed, self.key.h)
        return random_term_vector(self.params.b, self.params.k, self.size_params, term_seed, self.key.h.components)

    def issue(self, request: Optional[TermRequest] = None) -> TermReply:
        p = self._draw_terms()
        with self._lock:
            sid = int(self._rng.integers(1, 2**63))
            while sid in self._issued or sid in self.dead:
                sid = int(self._rng.integers(1, 2**63))
            self._issued[sid] = p.to_text().encode("utf-8")
        return TermReply(sid, p)

    def _retire(self, sid: int) -> bytes:
        with self._lock:
            block = self._issued.pop(sid, None)
            if block is None:
                raise UnknownSessionError(f"session {sid:#x} was not issued or is already closed")
            self.dead.add(sid)
            return block

    def receive(self, msg: CipherBundle) -> bytes:
        """Recover the plaintext ``y`` or raise a ``ProtocolError``."""
        block = self._retire(msg.session_id)
        if msg.p_block != block:
            raise TamperError(f"term vector of session {msg.session_id:#x} differs from the issued one")
        key = derive_session_key(msg.p, self.key)
        y = strip(self.cipher.decrypt(key.keystream(), msg.ciphertext))
        if not self.validity(y):
            raise InvalidPlaintextError(f"session {msg.session_id:#x} decrypted to nonsense")
        return y

    def verify(self, session_id: int, u: Sequence[LatticeElement]) -> bool:
        """Verifier side of the authentication-only variant."""
        try:
            block = self._retire(session_id)
        except UnknownSessionError:
            return False
        p = TermVector.from_text(block.decode("utf-8"))
        return tuple(u) == derive_session_key(p, self.key).u


@dataclass
class Kati:
    key: MasterKey
    params: ProtocolParams = field(default_factory=ProtocolParams)
    seed: int = 0
    cipher: Cipher = VERNAM

    def __post_init__(self):
        self._rng = np.random.default_rng([self.seed & 0xFFFFFFFFFFFFFFFF, 0x4A71])

    def request(self) -> TermRequest:
        return TermRequest()

    def send(self, reply: TermReply, y: bytes) -> CipherBundle:
        return kati_send(self.key, self.params.n, self.params.b, y, reply, self.cipher, self._rng)

    def authenticate(self, reply: TermReply) -> Tuple[LatticeElement, ...]:
        return authenticate(self.key, reply)


# Channel and adversary

class Channel:
    """Carries frames between the parties and keeps an append-only transcript.

    ``tamper``, if set, may rewrite each frame in flight; the transcript
    records what was actually delivered.
    """

    def __init__(self, tamper: Optional[Callable[[bytes], bytes]] = None):
        self.tamper = tamper
        self._log: List[bytes] = []
        self._lock = threading.Lock()

    def send(self, frame: bytes) -> bytes:
        if self.tamper is not None:
            frame = self.tamper(frame)
        with self._lock:
            self._log.append(frame)
        return frame

    @property
    def transcript(self) -> List[bytes]:
        with self._lock:
            return list(self._log)


def run_session(kati: Kati, bank: Bank, y: bytes, channel: Optional[Channel] = None) -> bytes:
    """One full exchange with every message framed through ``channel``."""
    channel = channel if channel is not None else Channel()
    request = decode_message(channel.send(encode_message(kati.request())))
    reply = decode_message(channel.send(encode_message(bank.issue(request))))
    bundle = decode_message(channel.send(encode_message(kati.send(reply, y))))
    return bank.receive(bundle)


@dataclass(frozen=True)
class Capture:
    session_id: int
    p: TermVector
    ciphertext: bytes
    plaintext: Optional[bytes] = None  # padded x, when known to the adversary


def adversary_transcript(
    frames: Sequence[bytes], known_plaintexts: Optional[Dict[int, bytes]] = None
) -> List[Capture]:
    """The (p, ciphertext) pairs visible to a passive listener.

    ``known_plaintexts`` maps session ids to guessed padded plaintexts,
    turning pairs into known-plaintext triples. Frames that do not
    decode are skipped.
    """
    known = known_plaintexts or {}
    out = []
    for frame in frames:
        try:
            msg = decode_message(frame)
            if not isinstance(msg, CipherBundle):
                continue
            p = msg.p
        except (BoolgenError, UnicodeDecodeError):
            continue
        out.append(Capture(msg.session_id, p, msg.ciphertext, known.get(msg.session_id)))
    return out


def recover_session_key(capture: Capture, n: int) -> SessionKey:
    """Known-plaintext recovery against Vernam: key = ciphertext XOR x.

    Only the components lying wholly inside the known prefix are returned.
    """
    if capture.plaintext is None:
        raise DomainError("key recovery needs a known plaintext")
    return SessionKey.from_keystream(vernam_encrypt(capture.ciphertext, capture.plaintext), n)


# Tamper experiment

@dataclass
class TamperReport:
    trials: int = 0
    bank_rejected: int = 0
    unparseable: int = 0
    key_unchanged: int = 0
    key_changed: int = 0
    decrypt_differs: int = 0
    predicate_detected: int = 0

    @property
    def detection_rate(self) -> float:
        return self.predicate_detected / self.key_changed if self.key_changed else 0.0

    def to_line(self) -> str:
        return (
            f"trials={self.trials} bank_rejected={self.bank_rejected} unparseable={self.unparseable} "
            f"key_unchanged={self.key_unchanged} key_changed={self.key_changed} "
            f"decrypt_differs={self.decrypt_differs} predicate_detected={self.predicate_detected} "
            f"detection_rate={self.detection_rate:.4f}"
        )


def tamper_test(
    trials: int,
    seed: int = 0,
    params: ProtocolParams = ProtocolParams(),
    message_length: Optional[int] = None,
) -> TamperReport:
    """Flip one random bit of the serialized p in ``trials`` fresh sessions.

    Each tampered bundle is handed to the Bank and its verdict recorded.
    Independently the flipped p is re-evaluated: whenever it yields a
    different keystream over the ciphertext's length, the decryption must
    differ from the padded plaintext. The validity predicate's verdict on
    such decryptions is only counted. Messages default to half the
    capacity, so the padded plaintext spans the whole key.
    """
    if message_length is None:
        message_length = params.capacity // 2
    if trials < 1:
        raise DomainError("trials must be positive")
    rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, 0x7A3B])
    key = MasterKey.random(params.n, params.k, seed)
    bank = Bank(key, params, seed=seed)
    kati = Kati(key, params, seed=seed)
    alphabet = np.frombuffer(bytes(range(32, 127)), dtype=np.uint8)
    report = TamperReport()
    for _ in range(trials):
        reply = bank.issue()
        y = rng.choice(alphabet, size=message_length).tobytes()
        bundle = kati.send(reply, y)
        old_key = derive_session_key(reply.p, key).keystream()
        x = vernam_decrypt(old_key, bundle.ciphertext)

        pos = int(rng.integers(len(bundle.p_block) * 8))
        block = bytearray(bundle.p_block)
        block[pos // 8] ^= 1 << (pos % 8)
        tampered = CipherBundle(bundle.session_id, bytes(block), bundle.ciphertext)
        report.trials += 1
        try:
            bank.receive(tampered)
        except ProtocolError:
            report.bank_rejected += 1

        try:
            new_key = derive_session_key(tampered.p, key).keystream()
        except (BoolgenError, UnicodeDecodeError):
            report.unparseable += 1
            continue
        span = len(bundle.ciphertext)
        if len(new_key) < span:
            report.unparseable += 1
            continue
        if new_key[:span] == old_key[:span]:
            report.key_unchanged += 1
            continue
        report.key_changed += 1
        decrypted = vernam_decrypt(new_key, bundle.ciphertext)
        if decrypted != x:
            report.decrypt_differs += 1
        if not default_validity(strip(decrypted)):
            report.predicate_detected += 1
    return report
