"""Path finding between superspecial abelian surfaces via elliptic products.

Both endpoints are walked into products of elliptic curves, the elliptic
components are connected in the 2-isogeny graph, the two elliptic paths
are run in parallel as a walk through products, and the whole chain is
written out as a certificate that can be checked step by step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .field import FieldError, PrimeCtx, get_ctx
from .genus1 import (
    EllipticPath,
    PathNotFoundError,
    curve_from_j,
    dual_kernel,
    j_invariant,
    mitm_path,
    neighbors,
    two_isogeny_step,
)
from .genus2 import (
    GenusTwoModel,
    JacobianOutcome,
    ProductOutcome,
    glue_elliptic,
    node_id,
    richelot_step,
    splitting_from_pairs,
)
from .graphwalk import HuntBudgetExceeded, hunt_product

__all__ = [
    "CERT_FORMAT",
    "CERT_VERSION",
    "AttackFailed",
    "CertificateError",
    "PathStep",
    "PathCertificate",
    "AttackConfig",
    "VerifyResult",
    "find_product_path",
    "combine_product_paths",
    "attack",
    "verify_certificate",
    "certificate_to_json",
    "certificate_from_json",
    "HuntBudgetExceeded",
]

CERT_FORMAT = "superspecial-path-certificate"
CERT_VERSION = 1
KINDS = ("richelot", "product_pair", "boundary_split", "boundary_glue")


class AttackFailed(RuntimeError):
    """The elliptic paths have different length parity (the bottom result)."""


class CertificateError(ValueError):
    pass


@dataclass
class PathStep:
    """One (2,2)-isogeny with witnesses for its domain, kernel and codomain.

    Domains and codomains are GenusTwoModel or an ordered pair of
    j-invariants. Kernels: a splitting for richelot/boundary_split, a pair
    of 2-torsion abscissas for product_pair, a gluing index for
    boundary_glue. ``rev`` steps are traversed codomain -> domain.
    """

    kind: str
    direction: str
    domain: object
    kernel: object
    codomain: object

    @property
    def source_id(self) -> str:
        return node_id(self.domain if self.direction == "fwd" else self.codomain)

    @property
    def target_id(self) -> str:
        return node_id(self.codomain if self.direction == "fwd" else self.domain)

    def reversed(self) -> "PathStep":
        return PathStep(self.kind, "rev" if self.direction == "fwd" else "fwd", self.domain, self.kernel, self.codomain)


@dataclass
class PathCertificate:
    p: int
    d: int
    start: str
    end: str
    steps: list
    meta: dict = field(default_factory=dict)
    version: int = CERT_VERSION

    def __len__(self):
        return len(self.steps)


@dataclass
class AttackConfig:
    seed_a: str = "1"
    seed_b: str = "2"
    workers: int = 1
    mode: str = "appendix"
    max_steps: int | None = None
    parity_retries: int = 1
    mitm_max_len: int = 256

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        if self.parity_retries < 0 or self.mitm_max_len < 1:
            raise ValueError("budgets must be non-negative")


# -- building blocks ------------------------------------------------------------


def find_product_path(A: GenusTwoModel, cfg: AttackConfig, seed: str) -> tuple[list, tuple]:
    """Forward steps from A to a product, and that product as a sorted pair."""
    rep = hunt_product(A.ctx.p, seed, cfg.workers, cfg.mode, start=A, max_steps=cfg.max_steps)
    steps = []
    for i, ws in enumerate(rep.psi):
        out = richelot_step(ws.model, ws.splitting)
        last = i == len(rep.psi) - 1
        if isinstance(out, ProductOutcome):
            if not last:
                raise AssertionError("product reached before the end of the walk")
            steps.append(PathStep("boundary_split", "fwd", ws.model, ws.splitting, out.pair))
        else:
            steps.append(PathStep("richelot", "fwd", ws.model, ws.splitting, out.model))
    return steps, rep.product.pair


def _pad(path: EllipticPath, n: int) -> EllipticPath:
    """Extend to length n by bouncing along the last edge (or any edge if empty)."""
    verts, kers = list(path.vertices), list(path.kernels)
    if len(kers) >= n:
        return EllipticPath(verts, kers)
    if kers:
        a, x = verts[-2], kers[-1]
    else:
        nj, x = neighbors(verts[0])[0]
        a = verts[0]
        # first bounce goes out along x, then back
        verts.append(nj)
        kers.append(x)
    b, xd = dual_kernel(a, x)
    forward = kers[-1] == x and verts[-1] == b
    while len(kers) < n:
        if forward:
            kers.append(xd)
            verts.append(a)
        else:
            kers.append(x)
            verts.append(b)
        forward = not forward
    return EllipticPath(verts, kers)


def combine_product_paths(beta: EllipticPath, eta: EllipticPath) -> list:
    """Run two elliptic paths side by side as steps between products.

    The shorter one is padded by going back and forth along its last edge,
    which needs the lengths to have the same parity; otherwise AttackFailed.
    Components are ordered (eta, beta).
    """
    a, b = len(beta), len(eta)
    if (a - b) % 2:
        raise AttackFailed(f"⊥: path lengths {a} and {b} have different parity")
    n = max(a, b)
    bb, ee = _pad(beta, n), _pad(eta, n)
    steps = []
    for i in range(n):
        dom = (ee.vertices[i], bb.vertices[i])
        cod = (ee.vertices[i + 1], bb.vertices[i + 1])
        steps.append(PathStep("product_pair", "fwd", dom, (ee.kernels[i], bb.kernels[i]), cod))
    return steps


def _connect(j1, j2, parity, cfg):
    try:
        return mitm_path(j1, j2, parity=parity, max_len=cfg.mitm_max_len)
    except PathNotFoundError as exc:
        raise AttackFailed(f"⊥: no elliptic path {j1!r} -> {j2!r}: {exc}") from exc


def attack(A: GenusTwoModel, A2: GenusTwoModel, cfg: AttackConfig | None = None) -> PathCertificate:
    """Certificate for a walk A -> A2 through products of elliptic curves."""
    cfg = cfg or AttackConfig()
    psi, (e, b) = find_product_path(A, cfg, cfg.seed_a)
    psi2, (e2, b2) = find_product_path(A2, cfg, cfg.seed_b)
    eta = _connect(e, e2, None, cfg)
    beta = _connect(b, b2, None, cfg)
    retries = 0
    if (len(eta) - len(beta)) % 2:
        if cfg.parity_retries == 0:
            raise AttackFailed(f"⊥: elliptic path lengths {len(eta)} and {len(beta)} differ in parity")
        # re-solve B -> B' on (vertex, parity) states
        retries = 1
        beta = _connect(b, b2, len(eta) % 2, cfg)
    pi = combine_product_paths(beta, eta)
    steps = psi + pi + [s.reversed() for s in reversed(psi2)]
    ctx = A.ctx
    return PathCertificate(
        p=ctx.p,
        d=ctx.d,
        start=node_id(A),
        end=node_id(A2),
        steps=steps,
        meta={
            "object": "walk",
            "seed_a": cfg.seed_a,
            "seed_b": cfg.seed_b,
            "workers": cfg.workers,
            "mode": cfg.mode,
            "psi_len": len(psi),
            "psi_prime_len": len(psi2),
            "a": len(beta),
            "e": len(eta),
            "parity_retries_used": retries,
        },
    )


# -- verification ---------------------------------------------------------------


@dataclass
class VerifyResult:
    ok: bool
    failures: list = field(default_factory=list)
    length: int = 0
    distinct_nodes: int = 0

    @property
    def is_path(self) -> bool:
        return self.ok and self.distinct_nodes == self.length + 1

    def to_json(self) -> dict:
        return {"ok": self.ok, "length": self.length, "is_path": self.is_path, "failures": self.failures}


def _check_step(st: PathStep) -> str | None:
    if st.kind not in KINDS or st.direction not in ("fwd", "rev"):
        return f"unknown kind/direction {st.kind}/{st.direction}"
    try:
        if st.kind in ("richelot", "boundary_split"):
            out = richelot_step(st.domain, st.kernel)
            if st.kind == "richelot" and not isinstance(out, JacobianOutcome):
                return "richelot step lands on a product"
            if st.kind == "boundary_split" and not isinstance(out, ProductOutcome):
                return "boundary split does not land on a product"
            got = node_id(out.model if isinstance(out, JacobianOutcome) else out.pair)
        elif st.kind == "product_pair":
            (j1, j2), (x1, x2) = st.domain, st.kernel
            got = node_id((
                j_invariant(two_isogeny_step(curve_from_j(j1), x1)),
                j_invariant(two_isogeny_step(curve_from_j(j2), x2)),
            ))
            c1, c2 = st.codomain
            if got != node_id((c1, c2)):
                return "product step codomain mismatch"
            if j_invariant(two_isogeny_step(curve_from_j(j1), x1)) != c1:
                return "product step component order mismatch"
        else:
            j1, j2 = st.domain
            out = glue_elliptic(curve_from_j(j1), curve_from_j(j2), int(st.kernel))
            got = node_id(out.model if isinstance(out, JacobianOutcome) else out.pair)
    except (ValueError, FieldError, AssertionError, TypeError, IndexError) as exc:
        return f"recomputation failed: {exc}"
    if got != node_id(st.codomain):
        return "recomputed codomain differs from witness"
    return None


def verify_certificate(cert: PathCertificate) -> VerifyResult:
    """Recompute every step forward from its domain and check the node chain."""
    res = VerifyResult(ok=True, length=len(cert.steps))
    nodes = [cert.start]
    prev = cert.start
    for i, st in enumerate(cert.steps):
        err = _check_step(st)
        if err is None:
            try:
                src, dst = st.source_id, st.target_id
            except (ValueError, FieldError) as exc:
                err, src, dst = f"bad witness: {exc}", None, None
            if err is None and src != prev:
                err = f"chain break: step starts at {src}, previous ended at {prev}"
        if err is not None:
            res.ok = False
            res.failures.append({"step": i, "kind": st.kind, "error": err})
            prev = None
            continue
        prev = dst
        nodes.append(dst)
    if prev != cert.end:
        res.ok = False
        res.failures.append({"step": len(cert.steps), "kind": "end", "error": f"walk ends at {prev}, expected {cert.end}"})
    res.distinct_nodes = len(set(nodes))
    return res


# -- serialisation --------------------------------------------------------------


def _enc_obj(x):
    if isinstance(x, GenusTwoModel):
        return {"model": x.to_json()}
    return {"pair": [x[0].encode(), x[1].encode()]}


def _dec_obj(ctx: PrimeCtx, data):
    if "model" in data:
        return GenusTwoModel.from_json(ctx, data["model"])
    a, b = data["pair"]
    return (ctx.decode(a), ctx.decode(b))


def _enc_kernel(kind, k):
    if kind == "product_pair":
        return [k[0].encode(), k[1].encode()]
    if kind == "boundary_glue":
        return int(k)
    return [list(pr) for pr in k]


def _dec_kernel(ctx, kind, k):
    if kind == "product_pair":
        return (ctx.decode(k[0]), ctx.decode(k[1]))
    if kind == "boundary_glue":
        return int(k)
    return splitting_from_pairs(k)


def certificate_to_json(cert: PathCertificate) -> str:
    doc = {
        "format": CERT_FORMAT,
        "version": cert.version,
        "p": cert.p,
        "d": cert.d,
        "start": cert.start,
        "end": cert.end,
        "meta": cert.meta,
        "steps": [
            {
                "kind": s.kind,
                "direction": s.direction,
                "domain": _enc_obj(s.domain),
                "kernel": _enc_kernel(s.kind, s.kernel),
                "codomain": _enc_obj(s.codomain),
            }
            for s in cert.steps
        ],
    }
    return json.dumps(doc, indent=1)


def certificate_from_json(text: str | bytes) -> PathCertificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateError(f"malformed certificate: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != CERT_FORMAT:
        raise CertificateError("not a path certificate")
    if doc.get("version") != CERT_VERSION:
        raise CertificateError(f"unsupported certificate version {doc.get('version')!r}")
    try:
        p = int(doc["p"])
        ctx = get_ctx(p)
        if int(doc["d"]) % p != ctx.d % p:
            raise CertificateError(
                f"field convention mismatch: certificate uses t^2 = {doc['d']}, expected t^2 = {ctx.d}"
            )
        steps = []
        for s in doc["steps"]:
            kind = s["kind"]
            steps.append(PathStep(kind, s["direction"], _dec_obj(ctx, s["domain"]), _dec_kernel(ctx, kind, s["kernel"]), _dec_obj(ctx, s["codomain"])))
        return PathCertificate(p, ctx.d, doc["start"], doc["end"], steps, doc.get("meta", {}), doc["version"])
    except CertificateError:
        raise
    except (KeyError, TypeError, ValueError, FieldError) as exc:
        raise CertificateError(f"malformed certificate: {exc}") from exc
