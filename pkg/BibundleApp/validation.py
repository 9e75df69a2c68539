from dataclasses import dataclass, field

from django.core.exceptions import ValidationError


@dataclass(frozen=True)
class Violation:
    axiom: str
    detail: str
    witness: tuple = ()

    def __str__(self):
        if self.witness:
            return f'{self.axiom}: {self.detail} (witness {self.witness})'
        return f'{self.axiom}: {self.detail}'


@dataclass(frozen=True)
class ValidationReport:
    """Ordered list of violated axioms; empty means the structure is valid."""

    violations: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def is_valid(self):
        return not self.violations

    @property
    def axioms(self):
        return tuple(dict.fromkeys(v.axiom for v in self.violations))

    def first(self, axiom):
        for v in self.violations:
            if v.axiom == axiom:
                return v
        return None

    def merged(self, other, prefix=''):
        extra = tuple(
            Violation(f'{prefix}{v.axiom}', v.detail, v.witness) for v in other.violations
        )
        return ValidationReport(self.violations + extra)

    def raise_if_invalid(self):
        if self.violations:
            raise ValidationError([
                ValidationError(str(v), code=v.axiom, params={'witness': v.witness})
                for v in self.violations
            ])


class ReportBuilder:
    """Collects violations, keeping at most ``per_axiom`` witnesses per axiom."""

    def __init__(self, per_axiom=3):
        self.per_axiom = per_axiom
        self._violations = []
        self._counts = {}

    def add(self, axiom, detail, *witness):
        count = self._counts.get(axiom, 0)
        self._counts[axiom] = count + 1
        if count < self.per_axiom:
            self._violations.append(Violation(axiom, detail, tuple(witness)))

    def extend(self, report, prefix=''):
        for v in report:
            self.add(f'{prefix}{v.axiom}', v.detail, *v.witness)

    def has(self, axiom):
        return axiom in self._counts

    def build(self):
        return ValidationReport(tuple(self._violations))
