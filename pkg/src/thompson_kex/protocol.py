"""Decomposition-problem key exchange over (A_s, B_s) and its line-delimited JSON wire format.

Alice sends ``a1 w b1``, Bob sends ``b2 w a2``; both arrive at
``a1 b2 w a2 b1 = b2 a1 w b1 a2`` because A_s and B_s commute elementwise.

Messages (one JSON object per line, keys sorted, no spaces)::

    {"params":{"M":..,"s":..,"w":{"neg":[..],"pos":[..]}},"type":"hello"}
    {"role":"alice"|"bob","type":"token","word":{"neg":[..],"pos":[..]}}
    {"digest":"<sha256 hex>","role":"alice"|"bob","type":"confirm"}

Alice opens with hello and her token. Bob answers with his token once he has
the parameters. Each side sends confirm after deriving the key.
"""

from __future__ import annotations

import hashlib
import json
import socket
from dataclasses import dataclass
from typing import Optional

from .engine import product
from .subgroups import SeededRng, SubgroupParams, gen_A, gen_B, gen_base_word, in_A, in_B
from .words import NormalWord, WordError

ROLES = ("alice", "bob")

# Substream labels derived from one seed.
STREAM_PARAMS, STREAM_A, STREAM_B = 0, 1, 2


class ProtocolError(ValueError):
    pass


class InvalidKey(ProtocolError):
    pass


@dataclass(frozen=True)
class ProtocolParams:
    s: int
    M: int
    w: NormalWord

    def __post_init__(self):
        if self.s < 2:
            raise ProtocolError(f"s must be at least 2, got {self.s}")
        if self.M < 2 or self.M % 2:
            raise ProtocolError(f"M must be a positive even integer, got {self.M}")
        if not isinstance(self.w, NormalWord):
            raise ProtocolError("base word must be a NormalWord")

    def to_json(self) -> dict:
        return {"s": self.s, "M": self.M, "w": self.w.to_json()}

    @classmethod
    def from_json(cls, obj) -> "ProtocolParams":
        try:
            return cls(int(obj["s"]), int(obj["M"]), _word_from_wire(obj["w"]))
        except (KeyError, TypeError) as exc:
            raise ProtocolError(f"malformed params {obj!r}") from exc

    @classmethod
    def generate(cls, s: int, M: int, seed: int) -> "ProtocolParams":
        rng = SeededRng(seed).split(STREAM_PARAMS)
        return cls(s, M, gen_base_word(SubgroupParams(s, M), rng))


@dataclass(frozen=True)
class PrivateKey:
    a: NormalWord
    b: NormalWord

    @classmethod
    def generate(cls, params: ProtocolParams, seed: int) -> "PrivateKey":
        root = SeededRng(seed)
        sp = SubgroupParams(params.s, params.M)
        return cls(gen_A(sp, root.split(STREAM_A)), gen_B(sp, root.split(STREAM_B)))

    def check(self, params: ProtocolParams) -> None:
        if not in_A(self.a, params.s):
            raise InvalidKey(f"a is not in A_{params.s}")
        if not in_B(self.b, params.s):
            raise InvalidKey(f"b is not in B_{params.s}")

    def to_json(self) -> dict:
        return {"a": self.a.to_json(), "b": self.b.to_json()}


@dataclass(frozen=True)
class PublicToken:
    u: NormalWord


@dataclass(frozen=True)
class SharedKey:
    k: NormalWord
    digest: str

    @classmethod
    def of(cls, k: NormalWord) -> "SharedKey":
        return cls(k, key_digest(k))


def key_digest(k: NormalWord) -> str:
    """SHA-256 of the canonical JSON text ``{"pos":[...],"neg":[...]}``."""
    return hashlib.sha256(k.dumps().encode()).hexdigest()


def alice_token(params: ProtocolParams, priv: PrivateKey) -> PublicToken:
    priv.check(params)
    return PublicToken(product(priv.a, params.w, priv.b))


def bob_token(params: ProtocolParams, priv: PrivateKey) -> PublicToken:
    priv.check(params)
    return PublicToken(product(priv.b, params.w, priv.a))


def alice_shared(params: ProtocolParams, priv: PrivateKey, bob_tok: PublicToken) -> SharedKey:
    return SharedKey.of(product(priv.a, bob_tok.u, priv.b))


def bob_shared(params: ProtocolParams, priv: PrivateKey, alice_tok: PublicToken) -> SharedKey:
    return SharedKey.of(product(priv.b, alice_tok.u, priv.a))


def _word_from_wire(obj) -> NormalWord:
    try:
        return NormalWord.from_json(obj)
    except WordError as exc:
        raise ProtocolError(f"rejected non-canonical word: {exc}") from exc


def encode(msg: dict) -> str:
    return json.dumps(msg, sort_keys=True, separators=(",", ":"))


def decode(line: str) -> dict:
    try:
        msg = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"bad JSON line: {exc}") from exc
    if not isinstance(msg, dict) or msg.get("type") not in ("hello", "token", "confirm"):
        raise ProtocolError(f"unknown message {line!r}")
    return msg


class KexSession:
    """One party's side of an exchange, driven by ``start`` and ``receive``.

    Both return the list of messages to send next. ``params`` is required for
    Alice and learned from ``hello`` by Bob.
    """

    def __init__(self, role: str, seed: int, params: Optional[ProtocolParams] = None):
        if role not in ROLES:
            raise ValueError(f"role must be one of {ROLES}")
        if role == "alice" and params is None:
            raise ValueError("alice needs protocol parameters")
        self.role = role
        self.seed = seed
        self.params = params
        self.priv: Optional[PrivateKey] = None
        self.token: Optional[PublicToken] = None
        self.shared: Optional[SharedKey] = None
        self.peer_digest: Optional[str] = None

    @property
    def peer(self) -> str:
        return "bob" if self.role == "alice" else "alice"

    @property
    def done(self) -> bool:
        return self.shared is not None and self.peer_digest is not None

    @property
    def agreed(self) -> bool:
        return self.done and self.shared.digest == self.peer_digest

    def _keys(self) -> list[dict]:
        self.priv = PrivateKey.generate(self.params, self.seed)
        make = alice_token if self.role == "alice" else bob_token
        self.token = make(self.params, self.priv)
        return [{"type": "token", "role": self.role, "word": self.token.u.to_json()}]

    def start(self) -> list[dict]:
        if self.role != "alice":
            return []
        return [{"type": "hello", "params": self.params.to_json()}] + self._keys()

    def receive(self, msg: dict) -> list[dict]:
        kind = msg.get("type")
        if kind == "hello":
            if self.role != "bob" or self.params is not None:
                raise ProtocolError("unexpected hello")
            self.params = ProtocolParams.from_json(msg.get("params"))
            return self._keys()
        if kind == "token":
            if msg.get("role") != self.peer or self.priv is None or self.shared is not None:
                raise ProtocolError(f"unexpected token message {msg!r}")
            tok = PublicToken(_word_from_wire(msg.get("word")))
            derive = alice_shared if self.role == "alice" else bob_shared
            self.shared = derive(self.params, self.priv, tok)
            return [{"type": "confirm", "role": self.role, "digest": self.shared.digest}]
        if kind == "confirm":
            if msg.get("role") != self.peer or not isinstance(msg.get("digest"), str):
                raise ProtocolError(f"unexpected confirm message {msg!r}")
            self.peer_digest = msg["digest"]
            return []
        raise ProtocolError(f"unknown message type {kind!r}")


def run_demo(s: int, M: int, seed_alice: int, seed_bob: int) -> dict:
    """Run both parties in-process; the transcript lists every message in send order."""
    params = ProtocolParams.generate(s, M, seed_alice)
    alice = KexSession("alice", seed_alice, params)
    bob = KexSession("bob", seed_bob)
    transcript: list[dict] = []
    queue = [("bob", m) for m in alice.start()]
    while queue:
        to, msg = queue.pop(0)
        transcript.append(msg)
        target, other = (bob, "alice") if to == "bob" else (alice, "bob")
        # Round-trip through the wire encoding so the demo exercises it.
        queue.extend((other, reply) for reply in target.receive(decode(encode(msg))))
    return {
        "params": params.to_json(),
        "transcript": transcript,
        "K_alice": alice.shared.k.to_json(),
        "K_bob": bob.shared.k.to_json(),
        "digest": alice.shared.digest,
        "K_equal": alice.shared.k == bob.shared.k and alice.agreed and bob.agreed,
    }


def _pump(session: KexSession, sock: socket.socket, first: list[dict]) -> list[dict]:
    transcript = []
    with sock.makefile("r", encoding="utf-8", newline="\n") as rfile, sock.makefile(
        "w", encoding="utf-8", newline="\n"
    ) as wfile:

        def send(msgs):
            for m in msgs:
                transcript.append(m)
                wfile.write(encode(m) + "\n")
            wfile.flush()

        send(first)
        while not session.done:
            line = rfile.readline()
            if not line:
                raise ProtocolError("peer closed the connection early")
            msg = decode(line)
            transcript.append(msg)
            send(session.receive(msg))
    return transcript


def serve(port: int, seed: int, host: str = "127.0.0.1", ready=None, timeout: float = 60.0) -> dict:
    """Accept one connection and play Bob. ``ready(port)`` fires once listening."""
    with socket.create_server((host, port)) as srv:
        srv.settimeout(timeout)
        if ready is not None:
            ready(srv.getsockname()[1])
        conn, _ = srv.accept()
        with conn:
            conn.settimeout(timeout)
            session = KexSession("bob", seed)
            transcript = _pump(session, conn, [])
    return _summary(session, transcript)


def connect(host: str, port: int, s: int, M: int, seed: int, timeout: float = 60.0) -> dict:
    """Connect and play Alice, who picks the public parameters from her seed."""
    session = KexSession("alice", seed, ProtocolParams.generate(s, M, seed))
    with socket.create_connection((host, port), timeout=timeout) as conn:
        transcript = _pump(session, conn, session.start())
    return _summary(session, transcript)


def _summary(session: KexSession, transcript: list[dict]) -> dict:
    return {
        "role": session.role,
        "transcript": transcript,
        "digest": session.shared.digest,
        "K_equal": session.agreed,
    }
