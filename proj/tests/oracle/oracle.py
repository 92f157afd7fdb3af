"""Independent reference values for the unit tests.

Plain-Python re-derivation of the kernels, the piecewise prox and the toy
runs. Run it and paste the printed numbers into the C++ tests when the
definitions change:

    python3 tests/oracle/oracle.py
"""
import json
import math


def theta_tilde(s, mu):
    return s * s / (2 * mu) + mu / 2 if abs(s) <= mu else abs(s)


def theta_tilde_d(s, mu):
    return s / mu if abs(s) <= mu else math.copysign(1.0, s)


def plus_tilde(s, mu):
    return (s + mu) ** 2 / (4 * mu) if abs(s) <= mu else max(s, 0.0)


def plus_tilde_d(s, mu):
    return (s + mu) / (2 * mu) if abs(s) <= mu else (1.0 if s > 0 else 0.0)


def piece(t, v):
    if t >= v:
        return 2
    if t <= -v:
        return 3
    return 1


def prox_scalar(w, d, tau, v, lo, hi):
    # tau*(|x|/v - theta_d(x)) + (x-w)^2/2; theta_2 = x/v - 1, theta_3 = -x/v - 1
    shift = {1: 0.0, 2: tau / v, 3: -tau / v}[d]
    u = w + shift
    z = math.copysign(max(abs(u) - tau / v, 0.0), u)
    return min(max(z, lo), hi)


def l1_value_grad(A, b, x, mu):
    m, n = len(A), len(x)
    val, g = 0.0, [0.0] * n
    for i in range(m):
        r = sum(A[i][j] * x[j] for j in range(n)) - b[i]
        val += theta_tilde(r, mu)
        dr = theta_tilde_d(r, mu)
        for j in range(n):
            g[j] += A[i][j] * dr
    return val / m, [gj / m for gj in g]


def censored_value_grad(A, b, c, x, mu):
    m, n = len(A), len(x)
    val, g = 0.0, [0.0] * n
    for i in range(m):
        s = sum(A[i][j] * x[j] for j in range(n)) - c[i]
        p = plus_tilde(s, mu)
        val += theta_tilde(p - b[i], mu)
        dr = theta_tilde_d(p - b[i], mu) * plus_tilde_d(s, mu)
        for j in range(n):
            g[j] += A[i][j] * dr
    return val / m, [gj / m for gj in g]


def phi_sum(x, v):
    return sum(min(1.0, abs(t) / v) for t in x)


def toy_run(lam, v, extrapolate, L=math.sqrt(2), mu0=0.1, eps=1e-3, alpha=1.0,
            sigma=0.9, kappa=0.5, a=1e-4, maxiter=10000, period=500, step_tol=1e-6,
            records=0):
    A, b = [[1.0, 1.0]], [1.0]
    x = [1.0, 0.8]
    xp = list(x)
    mu = mu0
    t = (1 + math.sqrt(5)) / 2
    beta = 0.0
    H_prev = l1_value_grad(A, b, x, mu)[0] + lam * phi_sum(x, v) + kappa * mu
    steps = [0.0, 0.0]
    k = 0
    trace = []
    while True:
        if mu <= eps:
            why = "mu_threshold"
            break
        if k >= maxiter:
            why = "maxiter"
            break
        if k >= 2 and sum(steps) <= step_tol * max(1.0, math.hypot(*x)):
            why = "stalled"
            break
        d = [piece(t_, v) for t_ in x]
        y = [x[i] + beta * (x[i] - xp[i]) for i in range(2)]
        _, g = l1_value_grad(A, b, y, mu)
        xn = [prox_scalar(y[i] - mu / L * g[i], d[i], lam * mu / L, v, 0.0, 1.0)
              for i in range(2)]
        sm = l1_value_grad(A, b, xn, mu)[0] + lam * phi_sum(xn, v)
        dsq = sum((xn[i] - x[i]) ** 2 for i in range(2))
        H = sm + (L / (4 * mu) + L * beta * beta / (4 * mu)) * dsq
        passed = H + kappa * mu - H_prev <= -alpha * mu * mu
        mun = mu if passed else min(mu, mu0 / (k + 1) ** sigma)
        restart = (k + 1) % period == 0
        if extrapolate:
            tp = 1.0 if restart else t
            tn = (1 + math.sqrt(1 + 4 * (mu / mun) * tp * tp)) / 2
            r = mun / mu
            bn = min((tp - 1) / tn, math.sqrt(max(0.0, (1 - a * r) * r)))
        else:
            tn, bn = t, 0.0
        monitor = H + kappa * mu
        if len(trace) < records:
            trace.append(dict(k=k, mu=mu, beta=beta, x=xn, monitor=monitor,
                              objective=abs(xn[0] + xn[1] - 1) + lam * phi_sum(xn, v)))
        if restart and extrapolate:
            mun = mu0
            monitor = l1_value_grad(A, b, xn, mun)[0] + lam * phi_sum(xn, v) + kappa * mun
        steps = [steps[1], math.sqrt(dsq)]
        xp, x = x, xn
        mu, t, beta, H_prev = mun, tn, bn, monitor
        k += 1
    return dict(x=x, iterations=k, termination=why, trace=trace)


def main():
    out = {}
    out["theta_tilde"] = [theta_tilde(s, 0.2) for s in (-0.5, -0.2, -0.1, 0.0, 0.15, 0.2, 0.7)]
    out["plus_tilde"] = [plus_tilde(s, 0.2) for s in (-0.5, -0.2, -0.1, 0.0, 0.15, 0.2, 0.7)]
    cases = [(0.3, 1, 0.2, 0.5, 0, 1), (1.7, 2, 0.2, 0.5, 0, 1), (-0.9, 3, 0.3, 0.6, -1, 1),
             (-0.9, 1, 0.3, 0.6, -1, 1), (0.05, 2, 0.4, 0.8, -2, 2), (2.5, 1, 0.1, 0.25, -3, 1.2)]
    out["prox"] = [prox_scalar(*c) for c in cases]
    A = [[1.0, -2.0, 0.5], [0.3, 0.4, -1.0], [2.0, 0.0, 1.0], [-0.5, 1.5, 0.25]]
    b = [0.2, -0.1, 1.0, 0.4]
    c = [0.0, 0.1, -0.2, 0.3]
    x = [0.3, 0.2, -0.4]
    out["l1_value_grad"] = l1_value_grad(A, b, x, 0.25)
    out["censored_value_grad"] = censored_value_grad(A, b, c, x, 0.25)
    toy = {}
    for lam, v in [(0.7, 0.4), (0.8, 0.5), (0.9, 0.6), (1.0, 0.7), (1.0, 0.5), (1.0, 0.3),
                   (1.2, 0.8), (1.3, 0.9), (1.4, 1.0)]:
        toy[f"{lam},{v}"] = dict(spg=toy_run(lam, v, False), spge=toy_run(lam, v, True))
    out["toy"] = toy
    out["toy_trace_1.2_0.8"] = toy_run(1.2, 0.8, True, records=3)["trace"]
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
