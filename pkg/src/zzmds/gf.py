"""Exact arithmetic over small finite fields, plus linear solving over them.

Elements are canonical integers in [0, q).  For a prime field the integer is
the residue itself.  For an extension field GF(p^w) it encodes the residue
polynomial's coefficient vector, constant term first, read as a base-p
integer (so for GF(2^w) the integer IS the coefficient bit-vector).

Everything is computed structurally on small ints; there are no log/exp
tables and no floating point anywhere.
"""

from __future__ import annotations


class FieldError(ValueError):
    """Invalid field construction or misuse of field elements."""


class SingularMatrixError(ValueError):
    """The linear system has no unique solution."""


MAX_PRIME = 65521
MAX_BINARY_DEGREE = 8

# Monic modulus x^w + (low part); low part keyed by degree, coefficient of
# x^j at tuple index j.  All are primitive, so x generates the nonzero
# elements (verified at construction time).
_BINARY_MODULI = {
    2: (1, 1),                   # x^2 + x + 1
    3: (1, 1, 0),                # x^3 + x + 1
    4: (1, 1, 0, 0),             # x^4 + x + 1
    5: (1, 0, 1, 0, 0),          # x^5 + x^2 + 1
    6: (1, 1, 0, 0, 0, 0),       # x^6 + x + 1
    7: (1, 0, 0, 1, 0, 0, 0),    # x^7 + x^3 + 1
    8: (1, 0, 1, 1, 1, 0, 0, 0),  # x^8 + x^4 + x^3 + x^2 + 1
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """GF(char^degree) with a fixed modulus polynomial and primitive element."""

    def __init__(self, char: int, degree: int = 1, modulus=None):
        if not is_prime(char):
            raise FieldError(f"characteristic {char} is not prime")
        if degree < 1:
            raise FieldError("degree must be positive")
        self.char = char
        self.degree = degree
        self.q = char ** degree
        if degree == 1:
            if modulus is not None:
                raise FieldError("prime fields take no modulus")
            self.modulus = None
        else:
            modulus = tuple(int(c) % char for c in modulus)
            if len(modulus) != degree:
                raise FieldError("modulus low part must have one coefficient per degree")
            self.modulus = modulus
            if not self._modulus_irreducible():
                raise FieldError(f"modulus {modulus} + x^{degree} is reducible over GF({char})")
        self.primitive = self._find_primitive()

    # -- construction helpers -------------------------------------------------

    def _digits(self, a: int):
        out = []
        for _ in range(self.degree):
            out.append(a % self.char)
            a //= self.char
        return out

    def _from_digits(self, digits) -> int:
        v = 0
        for c in reversed(digits):
            v = v * self.char + c
        return v

    def _poly_divisible(self, divisor) -> bool:
        # True if the monic modulus is divisible by the monic `divisor`
        # (coefficient list, low first, leading 1 included).
        p = self.char
        rem = list(self.modulus) + [1]
        d = len(divisor) - 1
        while len(rem) - 1 >= d:
            lead = rem[-1]
            if lead:
                shift = len(rem) - 1 - d
                for j, c in enumerate(divisor):
                    rem[shift + j] = (rem[shift + j] - lead * c) % p
            rem.pop()
        return all(c == 0 for c in rem)

    def _modulus_irreducible(self) -> bool:
        p, w = self.char, self.degree
        if w in (2, 3):
            # No roots in GF(p) is enough for degree 2 and 3.
            for x in range(p):
                acc = 1
                val = 0
                for c in self.modulus:
                    val = (val + c * acc) % p
                    acc = acc * x % p
                if (val + acc) % p == 0:   # + leading x^w term
                    return False
            return True
        # Trial division by every monic polynomial of degree 1..w//2.
        for d in range(1, w // 2 + 1):
            for low in range(p ** d):
                divisor = []
                t = low
                for _ in range(d):
                    divisor.append(t % p)
                    t //= p
                divisor.append(1)
                if self._poly_divisible(divisor):
                    return False
        return True

    def _order(self, a: int) -> int:
        acc = a
        n = 1
        while acc != 1:
            acc = self.mul(acc, a)
            n += 1
            if n > self.q:
                raise FieldError("element order computation diverged")
        return n

    def _find_primitive(self) -> int:
        if self.q == 2:
            return 1
        if self.degree == 1:
            for g in range(2, self.char):
                if self._order(g) == self.q - 1:
                    return g
            raise FieldError("no primitive root found")
        x = self.char  # the polynomial x
        if self._order(x) != self.q - 1:
            raise FieldError("x is not primitive for the chosen modulus")
        return x

    # -- element operations ---------------------------------------------------

    def check(self, a: int) -> int:
        if not isinstance(a, int) or isinstance(a, bool) or not 0 <= a < self.q:
            raise FieldError(f"{a!r} is not an element of {self.token}")
        return a

    def add(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a + b) % self.char
        da, db = self._digits(a), self._digits(b)
        return self._from_digits([(x + y) % self.char for x, y in zip(da, db)])

    def sub(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a - b) % self.char
        da, db = self._digits(a), self._digits(b)
        return self._from_digits([(x - y) % self.char for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        p = self.char
        if self.degree == 1:
            return a * b % p
        if a == 0 or b == 0:
            return 0
        w = self.degree
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * w - 1)
        for i, ca in enumerate(da):
            if ca:
                for j, cb in enumerate(db):
                    prod[i + j] = (prod[i + j] + ca * cb) % p
        for t in range(2 * w - 2, w - 1, -1):
            c = prod[t]
            if c:
                prod[t] = 0
                for j, mj in enumerate(self.modulus):
                    prod[t - w + j] = (prod[t - w + j] - c * mj) % p
        return self._from_digits(prod[:w])

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("division by zero")
        return self.pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        """a**e with a signed exponent, reduced mod q-1 for nonzero a."""
        self.check(a)
        if a == 0:
            if e > 0:
                return 0
            if e == 0:
                return 1
            raise FieldError("negative power of zero")
        e %= self.q - 1
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def elements(self):
        return range(self.q)

    @property
    def token(self) -> str:
        if self.degree == 1:
            return f"gf({self.char})"
        if self.char == 2:
            return f"gf(2^{self.degree})"
        return f"gf({self.q})"

    def __eq__(self, other):
        return (isinstance(other, Field)
                and self.char == other.char
                and self.degree == other.degree
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.char, self.degree, self.modulus))

    def __repr__(self):
        return f"Field({self.token})"


def field_create(kind: str, parameter: int) -> Field:
    """Make a field from a (kind, parameter) pair.

    kind 'prime': parameter is a prime <= 65521.
    kind 'binary-extension': parameter is the degree w in [1, 8]; w=1
    degenerates to GF(2).
    """
    if kind == "prime":
        if not is_prime(parameter):
            raise FieldError(f"{parameter} is not prime")
        if parameter > MAX_PRIME:
            raise FieldError(f"prime {parameter} exceeds the supported maximum {MAX_PRIME}")
        return Field(parameter)
    if kind == "binary-extension":
        if not 1 <= parameter <= MAX_BINARY_DEGREE:
            raise FieldError(f"extension degree must be in [1, {MAX_BINARY_DEGREE}]")
        if parameter == 1:
            return Field(2)
        return Field(2, parameter, _BINARY_MODULI[parameter])
    raise FieldError(f"unknown field kind {kind!r}")


def gf9() -> Field:
    """GF(9) as GF(3)[y]/(y^2 + y + 2); y is primitive."""
    return Field(3, 2, (2, 1))


def field_from_token(token: str) -> Field:
    """Parse a field descriptor token: gf(p), gf(2^w), or gf(9)."""
    tok = token.strip().lower()
    if not (tok.startswith("gf(") and tok.endswith(")")):
        raise FieldError(f"bad field token {token!r}")
    body = tok[3:-1]
    if "^" in body:
        base, _, exp = body.partition("^")
        if base.strip() != "2":
            raise FieldError(f"only characteristic-2 extensions use the gf(2^w) form: {token!r}")
        return field_create("binary-extension", int(exp))
    n = int(body)
    if n == 9:
        return gf9()
    if n > 2 and n & (n - 1) == 0:  # power of two: gf(4) means gf(2^2)
        return field_create("binary-extension", n.bit_length() - 1)
    return field_create("prime", n)


# -- linear algebra ---------------------------------------------------------


def _eliminate(field: Field, equations, rhs):
    """Gauss-Jordan on sparse rows ({col: coeff} dicts).

    Returns {pivot_col: (reduced_row, rhs_value)}.  Pivot rows never contain
    another pivot column, so at full rank each collapses to {col: 1}.
    Raises SingularMatrixError on an inconsistent row (0 = nonzero).
    """
    if rhs is None:
        rhs = [0] * len(equations)
    pivots = {}
    for row, b in zip(equations, rhs):
        row = {c: v for c, v in row.items() if v}
        while True:
            shared = [c for c in row if c in pivots]
            if not shared:
                break
            c = min(shared)
            f = row.pop(c)
            prow, pb = pivots[c]
            for cc, vv in prow.items():
                if cc == c:
                    continue
                nv = field.sub(row.get(cc, 0), field.mul(f, vv))
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
            b = field.sub(b, field.mul(f, pb))
        if not row:
            if b:
                raise SingularMatrixError("inconsistent system")
            continue
        c = min(row)
        ic = field.inv(row[c])
        newrow = {cc: field.mul(ic, vv) for cc, vv in row.items()}
        nb = field.mul(ic, b)
        for prow_pb in pivots.values():
            prow = prow_pb[0]
            if c in prow:
                f = prow.pop(c)
                for cc, vv in newrow.items():
                    if cc == c:
                        continue
                    nv = field.sub(prow.get(cc, 0), field.mul(f, vv))
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
                prow_pb[1] = field.sub(prow_pb[1], field.mul(f, nb))
        pivots[c] = [newrow, nb]
    return pivots


def solve_equations(field: Field, equations, rhs, nunknowns: int):
    """Solve a (possibly overdetermined but consistent) sparse linear system.

    equations is a list of {unknown_index: coefficient} dicts.  Raises
    SingularMatrixError if the solution is not unique.
    """
    pivots = _eliminate(field, equations, rhs)
    if len(pivots) < nunknowns:
        raise SingularMatrixError("rank-deficient system")
    return [pivots[c][1] for c in range(nunknowns)]


def column_rank(field: Field, equations, nunknowns: int) -> int:
    """Rank of the coefficient matrix given as sparse rows."""
    return len(_eliminate(field, equations, None))


def solve_linear(field: Field, matrix, rhs):
    """Solve the square dense system matrix * x = rhs over the field."""
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("solve_linear needs a square system")
    for row in matrix:
        for a in row:
            field.check(a)
    for b in rhs:
        field.check(b)
    equations = [{j: a for j, a in enumerate(row) if a} for row in matrix]
    return solve_equations(field, equations, list(rhs), n)
