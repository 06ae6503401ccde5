"""Independent reference computations used only by the test-suite.

Nothing here calls the package's transformation code: fields are boosted by
conjugating the electromagnetic field tensor with explicit Lorentz matrices,
and cone averages use a plain midpoint rule in (theta, phi).
"""
import numpy as np

SQRT8 = np.sqrt(8.0)


def boost_matrix(v):
    """Lorentz matrices (..., 4, 4) mapping coordinates (t, x, y, z) into
    the frame moving with velocity ``v``."""
    v = np.asarray(v, dtype=float)
    v2 = np.sum(v * v, axis=-1)
    g = 1.0 / np.sqrt(1.0 - v2)
    lam = np.zeros(v.shape[:-1] + (4, 4))
    lam[..., 0, 0] = g
    lam[..., 0, 1:] = -g[..., None] * v
    lam[..., 1:, 0] = -g[..., None] * v
    with np.errstate(invalid="ignore", divide="ignore"):
        k = np.where(v2 > 0, (g - 1.0) / np.where(v2 > 0, v2, 1.0), 0.0)
    lam[..., 1:, 1:] = np.eye(3) + k[..., None, None] * v[..., :, None] * v[..., None, :]
    return lam


def field_tensor(e, b):
    """Contravariant F^{mu nu} with signature (+,-,-,-) and c = 1."""
    e = np.asarray(e, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = np.broadcast_shapes(e.shape, b.shape)[:-1]
    f = np.zeros(shape + (4, 4))
    ex, ey, ez = (e[..., i] for i in range(3))
    bx, by, bz = (b[..., i] for i in range(3))
    f[..., 0, 1], f[..., 0, 2], f[..., 0, 3] = -ex, -ey, -ez
    f[..., 1, 2], f[..., 1, 3], f[..., 2, 3] = -bz, by, -bx
    f = f - np.swapaxes(f, -1, -2)
    return f


def fields_from_tensor(f):
    e = np.stack([-f[..., 0, 1], -f[..., 0, 2], -f[..., 0, 3]], axis=-1)
    b = np.stack([-f[..., 2, 3], f[..., 1, 3], -f[..., 1, 2]], axis=-1)
    return e, b


def tensor_boost(e, b, v):
    lam = boost_matrix(v)
    f = field_tensor(e, b)
    return fields_from_tensor(lam @ f @ np.swapaxes(lam, -1, -2))


def rest_field(b_lab, v_com, beta):
    """Magnetic field in the rest frame of particle b: lab -> COM (beta),
    then COM -> particle (v_com)."""
    b_lab = np.asarray(b_lab, dtype=float)
    e1, b1 = tensor_boost(np.zeros_like(b_lab), b_lab, beta)
    return tensor_boost(e1, b1, v_com)[1]


def singlet_correlation(n_a, n_b):
    """<(n_a . sigma) (x) (n_b . sigma)> on (|01> - |10>)/sqrt(2) by explicit
    state-vector algebra."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    psi = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2.0)
    op_a = n_a[0] * sx + n_a[1] * sy + n_a[2] * sz
    op_b = n_b[0] * sx + n_b[1] * sy + n_b[2] * sz
    return float(np.real(psi.conj() @ np.kron(op_a, op_b) @ psi))


STANDARD_FIELDS = {
    "a1": np.array([1.0, 0.0, 0.0]),
    "a2": np.array([0.0, 1.0, 0.0]),
    "b1": np.array([1.0, 1.0, 0.0]) / np.sqrt(2.0),
    "b2": np.array([1.0, -1.0, 0.0]) / np.sqrt(2.0),
}


def _unit_rows(x):
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def pointwise_s(speed, theta, phi, beta=0.0, fields=STANDARD_FIELDS):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    v = speed * np.stack(np.broadcast_arrays(st * np.cos(phi), st * np.sin(phi), np.cos(theta)), axis=-1)
    beta_v = np.array([0.0, 0.0, beta])
    nb1 = _unit_rows(rest_field(fields["b1"], v, beta_v))
    nb2 = _unit_rows(rest_field(fields["b2"], v, beta_v))
    a1, a2 = fields["a1"], fields["a2"]
    e = lambda a, n: -(n @ a)
    return e(a1, nb1) + e(a1, nb2) + e(a2, nb1) - e(a2, nb2)


def midpoint_cone_average(speed, theta_prime, beta=0.0, n_theta=2000, n_phi=4000,
                          correlator_average=False, chunk=100):
    """Cone average by the midpoint rule on an n_theta x n_phi grid.

    With ``correlator_average`` the signed CHSH combination is averaged
    before taking the absolute value.
    """
    h = theta_prime / n_theta
    theta = (np.arange(n_theta) + 0.5) * h
    phi = (np.arange(n_phi) + 0.5) * (2.0 * np.pi / n_phi)
    w = np.sin(theta)
    num = 0.0
    for lo in range(0, n_theta, chunk):
        sl = slice(lo, lo + chunk)
        c = pointwise_s(speed, theta[sl, None], phi[None, :], beta)
        vals = c if correlator_average else np.abs(c)
        num += float(w[sl] @ vals.mean(axis=1))
    avg = num / float(w.sum())
    return abs(avg) if correlator_average else avg
