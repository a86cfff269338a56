from dataclasses import dataclass

from .exceptions import RotationUnknown


@dataclass(frozen=True)
class RotationResult:
    image: object
    sign: int
    facts: tuple = ()


def rotate_curve(curve_id, k, table, db):
    """
    Apply T^k to a named curve by composing single-step rotation facts.

    Negative k walks the chain backwards through the preimages. A missing
    step raises RotationUnknown naming the curve where the chain breaks.
    """
    current = table.canonical(curve_id)
    sign = 1
    facts = []
    step = 1 if k >= 0 else -1
    for _ in range(abs(k)):
        if step > 0:
            fact = db.rotation_step(current)
            if fact is None:
                raise RotationUnknown(current, step)
            current = fact.image
        else:
            fact = db.rotation_preimage(current)
            if fact is None:
                raise RotationUnknown(current, step)
            current = fact.source
        sign *= fact.sign
        facts.append(fact)
    return RotationResult(current, sign, tuple(facts))
