"""The sign and index conventions used throughout the package, as printable text."""

CONVENTIONS = """\
agd conventions
===============

Indices and storage
-------------------
  All frame and coordinate indices are 0-based in code; model files use names.
  Coordinates x^i on one patch M. Frames: e_a of E, xi_alpha of F, d_<x> of TM.
  anchor[a][i]          rho(e_a) = sum_i anchor[a][i] d_i
  bracket[a][b]         [e_a, e_b] = sum_c c^c_{ab} e_c        (list of c^c_{ab})
  gamma[alpha][a]       nabla_{xi_alpha} e_a = sum_b Gamma^b_{alpha a} e_b
  zeta[alpha][beta]     zeta(xi_alpha, xi_beta), antisymmetric
  K.matrix[t][s]        K(e_s) = sum_t K[t][s] f_t   (column s is the image of e_s)

Brackets and anchors
--------------------
  vector fields   [X, Y]^i = X(Y^i) - Y(X^i)
  Leibniz         [mu, f nu] = f [mu, nu] + rho(mu)(f) nu
  sections        [mu, nu] = mu^a nu^b c_{ab} + rho(mu)(nu^c) e_c - rho(nu)(mu^c) e_c

Connections
-----------
  (nabla_X mu)^b = X^alpha mu^a Gamma^b_{alpha a} + rho_F(X)(mu^b)
  R_nabla(X, Y) mu = nabla_X nabla_Y mu - nabla_Y nabla_X mu - nabla_{[X,Y]} mu
  torsion of an E-connection D on E: t_D(mu, nu) = D_mu nu - D_nu mu - [mu, nu]
  nabla_K  (E-connection on E): (nabla_K)_mu nu = nabla_{K mu} nu

Basic connections of (nabla, K)
-------------------------------
  bas_mu nu = [mu, nu] + nabla_{K nu} mu
  bas_mu X  = [K mu, X] + K(nabla_X mu)
  basic curvature
    R^bas(mu, nu) X = nabla_X [mu, nu] - [nabla_X mu, nu] - [mu, nabla_X nu]
                      - nabla_{bas_nu X} mu + nabla_{bas_mu X} nu
  t_bas = -t_{nabla_K}
  (nabla_X t)(mu, nu) = nabla_X (t(mu, nu)) - t(nabla_X mu, nu) - t(mu, nabla_X nu)
  R^bas(mu, nu) X = (nabla_X t)(mu, nu) - R_nabla(K mu, X) nu + R_nabla(K nu, X) mu
  curvature of the basic pair: R_{bas on E} = -R^bas o K,  R_{bas on F} = -K o R^bas

Adjustment
----------
  Cartan:      R^bas = 0
  covariant:   R_nabla(X, Y) nu + (d^bas zeta)(X, Y; nu) = 0, where
               (d^bas zeta)(X, Y; nu) = bas_nu(zeta(X, Y)) - zeta(bas_nu X, Y) - zeta(X, bas_nu Y)
               with K = 0 this reads R_nabla(X, Y) nu = [zeta(X, Y), nu]
  nabla^zeta_X mu = nabla_X mu - zeta(X, K mu)
  strict:      d^{nabla^zeta} zeta = 0, with
    (d^D zeta)(X, Y, Z) = D_X zeta(Y, Z) - D_Y zeta(X, Z) + D_Z zeta(X, Y)
                          - zeta([X, Y], Z) + zeta([X, Z], Y) - zeta([Y, Z], X)
  H(mu, nu) = t_bas(mu, nu) + zeta(K mu, K nu)
  [mu, nu] = H(mu, nu) + nabla^zeta_{K mu} nu - nabla^zeta_{K nu} mu + zeta(K mu, K nu)
  Yang-Mills:  nabla^zeta H = 0,  R_{nabla^zeta}(X, Y) mu = H(zeta(X, Y), mu),  d^{nabla^zeta} zeta = 0
  reconstruction: nabla_X mu = nabla^zeta_X mu + zeta(X, K mu)

Extension A = F + E  (frame: F first, then E)
---------------------------------------------
  rho_A(X + mu) = rho_F(X + K mu)
  W = [mu, nu]_E + nabla_X nu - nabla_Y mu + zeta(X, Y)
  [X + mu, Y + nu]_A = ([X + K mu, Y + K nu]_F - K W) + W
  maps: D = [I | K]: A -> F      iota = [-K ; I]: E -> A
        iota_hat = [0 ; I]: E_H -> A   psi = [I | 0]: A -> F
        chi = [I ; 0]: F -> A          chi_hat = [0 | I]: A -> E
  R_chi(X, Y) = [chi X, chi Y]_A - chi[X, Y]_F = iota(zeta(X, Y)),   D o R_chi = 0

Pullback along phi: N = M x R^k -> M
------------------------------------
  frame of phi^!F: lifted frame of F, then d_<v> for each fibre coordinate v
  xi = [I | 0]: phi^!F -> phi^*F
  phi^!K(mu) = (K mu, vertical part of the action field of mu)
  zeta'(lifted, lifted) = lifted zeta; zeta' = 0 if an argument is vertical

Change of splitting (K = 0)
---------------------------
  nabla^lam_X mu = nabla_X mu + [lam(X), mu]
  additive: zeta^lam = zeta + d^nabla lam + [lam X, lam Y]   (default)
  printed:  zeta^lam = d^nabla lam + [lam X, lam Y]
"""


def conventions() -> str:
    return CONVENTIONS


def markdown() -> str:
    """The sheet as the page kept at ``docs/conventions.md``."""
    return ("# Conventions\n\n"
            "Generated from `agd conventions`; regenerate with "
            "`agd conventions --markdown > docs/conventions.md`.\n\n"
            "```text\n" + CONVENTIONS + "```\n")

