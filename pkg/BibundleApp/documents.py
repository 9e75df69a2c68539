"""
JSON documents for groupoids, actions, functors, bibundles and internal
groupoids.

A document is ``{"kind": ..., "name": ..., "payload": ...}``.  Serialization
always inlines nested groupoids; when parsing, a nested groupoid may instead be
a string, which is handed to a resolver (the management commands resolve
``db:<name>`` references against stored documents).
"""
import json
import logging
from dataclasses import dataclass

from .action import GAction, make_action, validate_action
from .bibundle import Bibundle, make_bibundle, validate_bibundle
from .exceptions import DocumentError
from .functor import InternalFunctor, make_functor, validate_functor
from .groupoid import Groupoid, make_groupoid, validate_groupoid
from .morita import InternalGroupoidInActions, make_internal_groupoid, validate_internal_groupoid

logger = logging.getLogger(__name__)

GROUPOID = 'groupoid'
ACTION = 'action'
FUNCTOR = 'functor'
BIBUNDLE = 'bibundle'
INTERNAL_GROUPOID = 'internal-groupoid'

KIND_CHOICES = [
    (GROUPOID, 'Groupoid'),
    (ACTION, 'Action'),
    (FUNCTOR, 'Functor'),
    (BIBUNDLE, 'Bibundle'),
    (INTERNAL_GROUPOID, 'Internal groupoid'),
]
KINDS = tuple(kind for kind, _ in KIND_CHOICES)


@dataclass(frozen=True)
class Document:
    kind: str
    name: str
    payload: object


def kind_of(structure):
    for cls, kind in (
        (Bibundle, BIBUNDLE), (Groupoid, GROUPOID), (GAction, ACTION),
        (InternalFunctor, FUNCTOR), (InternalGroupoidInActions, INTERNAL_GROUPOID),
    ):
        if isinstance(structure, cls):
            return kind
    raise TypeError(f'no document kind for {type(structure).__name__}')


def document_for(structure, name=''):
    return Document(kind_of(structure), name, structure)


# ---- serialization -------------------------------------------------------

def _triples(table):
    return [list(t) for t in table]


def groupoid_payload(G):
    return {
        'objects': G.objects.size,
        'arrows': G.arrows.size,
        'src': list(G.src.table),
        'tgt': list(G.tgt.table),
        'unit': list(G.unit.table),
        'inv': list(G.inv.table),
        'mul': _triples(G.mul_table),
    }


def _action_body(A):
    return {'carrier': A.carrier.size, 'anchor': list(A.anchor.table), 'act': _triples(A.act_table)}


def action_payload(A):
    return {'groupoid': groupoid_payload(A.groupoid), **_action_body(A)}


def functor_payload(F):
    return {
        'dom': groupoid_payload(F.dom),
        'cod': groupoid_payload(F.cod),
        'obj_map': list(F.obj_map.table),
        'arr_map': list(F.arr_map.table),
    }


def bibundle_payload(P):
    return {
        'left': groupoid_payload(P.left),
        'right': groupoid_payload(P.right),
        'carrier': P.carrier.size,
        'p': list(P.p_anchor.table),
        'q': list(P.q_anchor.table),
        'h_act': _triples(P.h_table),
        'g_act': _triples(P.g_table),
    }


def internal_groupoid_payload(K):
    return {
        'base': groupoid_payload(K.base),
        'obj_action': _action_body(K.obj_action),
        'arr_action': _action_body(K.arr_action),
        'src': list(K.src.map.table),
        'tgt': list(K.tgt.map.table),
        'unit': list(K.unit.map.table),
        'inv': list(K.inv.map.table),
        'mul': _triples(K.mul_table),
    }


PAYLOAD_WRITERS = {
    GROUPOID: groupoid_payload,
    ACTION: action_payload,
    FUNCTOR: functor_payload,
    BIBUNDLE: bibundle_payload,
    INTERNAL_GROUPOID: internal_groupoid_payload,
}


def to_json(document):
    return {
        'kind': document.kind,
        'name': document.name,
        'payload': PAYLOAD_WRITERS[document.kind](document.payload),
    }


def serialize(document):
    return json.dumps(to_json(document), sort_keys=True, indent=2) + '\n'


# ---- parsing -------------------------------------------------------------

def _field(data, key, path):
    if not isinstance(data, dict):
        raise DocumentError('expected an object', path=path)
    if key not in data:
        raise DocumentError(f'missing field "{key}"', path=path)
    return data[key]


def _count(data, key, path):
    value = _field(data, key, path)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise DocumentError('expected a non-negative integer', path=f'{path}.{key}')
    return value


def _indices(data, key, length, bound, path):
    values = _field(data, key, path)
    where = f'{path}.{key}'
    if not isinstance(values, list):
        raise DocumentError('expected a list', path=where)
    if len(values) != length:
        raise DocumentError(f'expected {length} entries, found {len(values)}', path=where)
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < bound:
            raise DocumentError(f'index {v!r} is outside 0..{bound - 1}', path=f'{where}[{i}]')
    return values


def _triple_list(data, key, bounds, path):
    values = _field(data, key, path)
    where = f'{path}.{key}'
    if not isinstance(values, list):
        raise DocumentError('expected a list of triples', path=where)
    seen = set()
    for i, t in enumerate(values):
        if not isinstance(t, list) or len(t) != 3:
            raise DocumentError('expected a triple', path=f'{where}[{i}]')
        for j, (v, bound) in enumerate(zip(t, bounds)):
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < bound:
                raise DocumentError(
                    f'index {v!r} is outside 0..{bound - 1}', path=f'{where}[{i}][{j}]'
                )
        if tuple(t[:2]) in seen:
            raise DocumentError(f'duplicate entry for {t[:2]}', path=f'{where}[{i}]')
        seen.add(tuple(t[:2]))
    return values


def _check(report, path):
    if report.is_valid:
        return
    first = report.violations[0]
    logger.debug('document at %s failed %d checks', path, len(report))
    raise DocumentError(str(first), path=path, code=first.axiom, witness=first.witness)


def parse_groupoid(data, path=GROUPOID, resolver=None, check=True):
    if isinstance(data, str):
        return _resolve(data, path, resolver)
    n0 = _count(data, 'objects', path)
    n1 = _count(data, 'arrows', path)
    G = make_groupoid(
        n0, n1,
        src=_indices(data, 'src', n1, n0, path),
        tgt=_indices(data, 'tgt', n1, n0, path),
        unit=_indices(data, 'unit', n0, n1, path),
        inv=_indices(data, 'inv', n1, n1, path),
        mul_table=[tuple(t) for t in _triple_list(data, 'mul', (n1, n1, n1), path)],
    )
    if check:
        _check(validate_groupoid(G), path)
    return G


def _resolve(reference, path, resolver):
    if resolver is None:
        raise DocumentError(f'cannot resolve reference "{reference}"', path=path)
    document = resolver(reference)
    if document.kind != GROUPOID:
        raise DocumentError(f'"{reference}" is a {document.kind}, not a groupoid', path=path)
    return document.payload


def _action_from_body(G, data, path, check=True):
    n = _count(data, 'carrier', path)
    A = make_action(
        G, n,
        anchor=_indices(data, 'anchor', n, G.objects.size, path),
        act=[tuple(t) for t in _triple_list(data, 'act', (G.arrows.size, n, n), path)],
    )
    if check:
        _check(validate_action(A), path)
    return A


def parse_action(data, path=ACTION, resolver=None, check=True):
    G = parse_groupoid(_field(data, 'groupoid', path), f'{path}.groupoid', resolver)
    return _action_from_body(G, data, path, check)


def parse_functor(data, path=FUNCTOR, resolver=None, check=True):
    H = parse_groupoid(_field(data, 'dom', path), f'{path}.dom', resolver)
    G = parse_groupoid(_field(data, 'cod', path), f'{path}.cod', resolver)
    F = make_functor(
        H, G,
        _indices(data, 'obj_map', H.objects.size, G.objects.size, path),
        _indices(data, 'arr_map', H.arrows.size, G.arrows.size, path),
    )
    if check:
        _check(validate_functor(F), path)
    return F


def parse_bibundle(data, path=BIBUNDLE, resolver=None, check=True):
    H = parse_groupoid(_field(data, 'left', path), f'{path}.left', resolver)
    G = parse_groupoid(_field(data, 'right', path), f'{path}.right', resolver)
    n = _count(data, 'carrier', path)
    P = make_bibundle(
        H, G, n,
        p=_indices(data, 'p', n, H.objects.size, path),
        q=_indices(data, 'q', n, G.objects.size, path),
        h_act=[tuple(t) for t in _triple_list(data, 'h_act', (H.arrows.size, n, n), path)],
        g_act=[tuple(t) for t in _triple_list(data, 'g_act', (G.arrows.size, n, n), path)],
    )
    if check:
        _check(validate_bibundle(P), path)
    return P


def parse_internal_groupoid(data, path=INTERNAL_GROUPOID, resolver=None, check=True):
    G = parse_groupoid(_field(data, 'base', path), f'{path}.base', resolver)
    K0 = _action_from_body(G, _field(data, 'obj_action', path), f'{path}.obj_action')
    K1 = _action_from_body(G, _field(data, 'arr_action', path), f'{path}.arr_action')
    n0, n1 = K0.carrier.size, K1.carrier.size
    K = make_internal_groupoid(
        K0, K1,
        src=_indices(data, 'src', n1, n0, path),
        tgt=_indices(data, 'tgt', n1, n0, path),
        unit=_indices(data, 'unit', n0, n1, path),
        inv=_indices(data, 'inv', n1, n1, path),
        mul_table=[tuple(t) for t in _triple_list(data, 'mul', (n1, n1, n1), path)],
    )
    if check:
        _check(validate_internal_groupoid(K), path)
    return K


PAYLOAD_READERS = {
    GROUPOID: parse_groupoid,
    ACTION: parse_action,
    FUNCTOR: parse_functor,
    BIBUNDLE: parse_bibundle,
    INTERNAL_GROUPOID: parse_internal_groupoid,
}


def from_json(data, resolver=None, check=True):
    kind = _field(data, 'kind', '')
    if kind not in PAYLOAD_READERS:
        raise DocumentError(f'unknown kind {kind!r}; expected one of {", ".join(KINDS)}', path='kind')
    name = data.get('name', '')
    if not isinstance(name, str):
        raise DocumentError('expected a string', path='name')
    payload = PAYLOAD_READERS[kind](_field(data, 'payload', ''), kind, resolver, check)
    return Document(kind, name, payload)


def parse(text, resolver=None, check=True):
    """
    Parse and validate a document.  With ``check=False`` the top-level
    structure is only range-checked, nested groupoids are still validated.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f'{exc.msg} at line {exc.lineno} column {exc.colno}') from None
    return from_json(data, resolver, check)
