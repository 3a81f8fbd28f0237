"""Independent evaluation of the threshold functions with Python fractions.

Used once to freeze the expected values in the Rust test suites.
"""
from fractions import Fraction as F
from math import ceil, prod


def ceil_frac(x):
    return -((-x.numerator) // x.denominator)


def sigma(theta, eps, k):
    assert 0 < theta < eps <= 1 and k >= 2
    return ceil_frac(F(k * (k - 1)) / (2 * (eps**k - theta**k)))


def eps_prime(eps, m):
    k = len(m) - 1
    if k == 0:
        return eps
    e = sum(prod(m[j:k]) for j in range(k))
    return eps ** prod(m[:k]) * F(1, 2 ** (2 * e))


def eps_recurrence(eps, m):
    e = eps
    for q in range(len(m) - 1):
        e = (e / 4) ** m[q]
    return e


def t_bound(eps, m):
    ep = eps_prime(eps, m)
    return (2 / ep) * sigma(ep / 4, ep / 2, m[-1])


def q_bound(theta, eps, r, m):
    return t_bound(F(1, 8) * ((eps - theta) / 2**r) ** 2, m)


def s_delta(delta):
    s = 0
    while F(2) ** (1 - s) > delta:
        s += 1
    return s


def dyadic(s):
    return [F(i, 2**s) for i in range(1, 2**s + 1)]


def v_delta(delta, m, n):
    sd = s_delta(delta)
    k = len(m) - 1
    if k == 0:
        return max(t_bound(e, m) for e in dyadic(sd))
    best = t_bound(min(dyadic(sd)), m)
    grid = dyadic(sd + k)
    for i in range(1, k + 1):
        r = prod(n[:i])
        for a in grid:
            for b in grid:
                if a < b:
                    best = max(best, q_bound(a, b, r, m[i:]))
    return best


def f_chain(delta, m):
    out = []
    for j in range(len(m)):
        out.append(ceil_frac(F(v_delta(delta, m[: j + 1], out))))
    return out


if __name__ == "__main__":
    print("sigma(1/4,1/2,2)", sigma(F(1, 4), F(1, 2), 2))
    print("sigma(1/2,1,2)", sigma(F(1, 2), F(1), 2))
    print("sigma(1/8,1/4,2)", sigma(F(1, 8), F(1, 4), 2))
    print("sigma(1/4,1/2,3)", sigma(F(1, 4), F(1, 2), 3))
    print("eps_prime(1/2,(2,2))", eps_prime(F(1, 2), [2, 2]))
    print("eps_prime(1,(3,2))", eps_prime(F(1), [3, 2]), eps_recurrence(F(1), [3, 2]))
    print("t(1/2,(2))", t_bound(F(1, 2), [2]))
    print("t(1,(2))", t_bound(F(1), [2]))
    print("t(3/4,(2))", t_bound(F(3, 4), [2]))
    print("t(1/2,(2,2))", t_bound(F(1, 2), [2, 2]))
    print("t(1/4,(2,2))", t_bound(F(1, 4), [2, 2]))
    print("q(1/4,1/2,1,(2))", q_bound(F(1, 4), F(1, 2), 1, [2]))
    print("v(1/2,(2))", v_delta(F(1, 2), [2], []))
    print("v(1,(2))", v_delta(F(1), [2], []))
    v = v_delta(F(1, 2), [2, 2], [688])
    print("v(1/2,(2,2),(688)) bits", v.numerator.bit_length(), "den", v.denominator)
    fc = f_chain(F(1, 2), [2, 2])
    print("f(1/2,(2,2))", fc[0], fc[1].bit_length(), fc[1] % 10**12)
    print("f(1/4,(3))", f_chain(F(1, 4), [3]))
    print("f(1/2,(3))", f_chain(F(1, 2), [3]))
    # T tower grid
    for e in [F(1, 2), F(1, 4), F(1, 8)]:
        p = 0
        while F(2) ** p < 1 / e:
            p += 1
        for m in [[2], [3], [2, 2], [2, 3], [3, 2], [3, 3]]:
            t = t_bound(e, m)
            rhs = 2 ** (5 * p * prod(m))
            print("t-tower", e, m, "T=", t, "p2=", p, "holds", t <= rhs)
