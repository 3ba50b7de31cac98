import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybridflow.errors import ConfigurationError, DivergenceError, DomainError, MessageError
from hybridflow.grid import GridSpec
from hybridflow.lbm import (CS2, E, E5, BodyForceSpec, BoundaryCondition, LatticeModel, LatticeState,
                            bc_noneq_extrapolation, bc_velocity_gradient, buoyancy_coefficient, cavity_solver,
                            edge_nodes, equilibrium_f, equilibrium_f_field, equilibrium_g, equilibrium_g_field,
                            LBMSolver, cavity_boundaries, initial_state, macroscopic, nondimensional_transport,
                            relaxation_times, step_energy, step_flow)
from hybridflow.lbm.lattice import check_isotropy
from hybridflow.lbm.boundaries import temperature
from hybridflow.lbm.solver import stream
from hybridflow.metrics import CaseSpec, nusselt_profile

velocity = st.floats(-0.2, 0.2)
density = st.floats(0.5, 2.0)


def test_velocity_sets_are_isotropic():
    assert check_isotropy()


@given(density, velocity, velocity)
def test_equilibrium_moments(rho, ux, uy):
    feq = equilibrium_f_field(rho, ux, uy)
    assert feq.sum() == pytest.approx(rho, rel=1e-12)
    np.testing.assert_allclose((E * feq[:, None]).sum(axis=0), [rho * ux, rho * uy], atol=1e-12)
    second = np.einsum('i,ia,ib->ab', feq, E, E)
    expected = rho * (CS2 * np.eye(2) + np.outer([ux, uy], [ux, uy]))
    np.testing.assert_allclose(second, expected, atol=1e-12)


@given(density, velocity, velocity)
def test_pointwise_and_field_equilibria_agree(rho, ux, uy):
    feq = equilibrium_f_field(rho, ux, uy)
    for i in range(9):
        assert equilibrium_f(rho, (ux, uy), i) == pytest.approx(feq[i], abs=1e-14)


@given(st.floats(0.0, 2.0), velocity, velocity)
def test_thermal_equilibrium_moments(T, ux, uy):
    geq = equilibrium_g_field(T, ux, uy)
    assert geq.sum() == pytest.approx(T, abs=1e-12)
    np.testing.assert_allclose((E5 * geq[:, None]).sum(axis=0), [T * ux, T * uy], atol=1e-12)
    assert equilibrium_g(T, (ux, uy), 1) == pytest.approx(geq[1], abs=1e-14)


def test_equilibrium_domain_errors():
    with pytest.raises(DomainError):
        equilibrium_f(0.0, (0.0, 0.0), 0)
    with pytest.raises(DomainError):
        equilibrium_f(1.0, (0.6, 0.0), 0)
    # the thermal equilibrium itself takes any velocity; step_energy guards the range
    assert equilibrium_g(1.0, (0.0, -0.6), 4) == pytest.approx((1.0 + 1.8) / 6.0)
    state = initial_state((5, 5), T=1.0)
    with pytest.raises(DivergenceError):
        step_energy(state, LatticeModel(tau_v=0.8, tau_T=0.8), velocity=(np.full((5, 5), 0.6), np.zeros((5, 5))))


def test_lattice_model_relaxation_limits():
    with pytest.raises(ConfigurationError):
        LatticeModel(tau_v=0.5)
    with pytest.raises(ConfigurationError):
        LatticeModel(tau_v=0.8, tau_T=0.4)
    model = LatticeModel(tau_v=0.8, tau_T=1.1)
    assert model.nu == pytest.approx(0.1)
    assert model.alpha == pytest.approx(0.2)


def test_streaming_moves_each_population_along_its_direction():
    post = np.zeros((9, 6, 5))
    post[:, 2, 2] = np.arange(1, 10)
    out = stream(post, E)
    for k, (ex, ey) in enumerate(E):
        assert out[k, (2 + ex) % 6, (2 + ey) % 5] == k + 1
    np.testing.assert_array_equal(np.sort(out.ravel()), np.sort(post.ravel()))


def test_periodic_step_conserves_mass_and_momentum():
    rng = np.random.default_rng(7)
    shape = (8, 6)
    state = initial_state(shape, rho=1.0 + 0.01 * rng.standard_normal(shape),
                          u=0.02 * rng.standard_normal(shape), v=0.02 * rng.standard_normal(shape))
    state.f += 1e-3 * rng.random(state.f.shape)
    rho0, ux0, uy0 = macroscopic(state.f)
    new = step_flow(state, LatticeModel(tau_v=0.7))
    rho1, ux1, uy1 = macroscopic(new.f)
    assert rho1.sum() == pytest.approx(rho0.sum(), rel=1e-13)
    assert (rho1 * ux1).sum() == pytest.approx((rho0 * ux0).sum(), abs=1e-12)
    assert (rho1 * uy1).sum() == pytest.approx((rho0 * uy0).sum(), abs=1e-12)


def test_edge_nodes_corner_ownership():
    west = edge_nodes((6, 5), 'west')
    assert list(west.boundary[1]) == [0, 1, 2, 3, 4]
    # corner inner neighbours are diagonal
    assert (west.inner[0][0], west.inner[1][0]) == (1, 1)
    south = edge_nodes((6, 5), 'south')
    assert list(south.boundary[0]) == [1, 2, 3, 4]
    periodic = edge_nodes((6, 5), 'south', span='full', periodic=True)
    assert list(periodic.inner[0]) == list(range(6))


def test_edge_nodes_next_to_a_corner_use_normal_neighbours():
    south = edge_nodes((6, 5), 'south')
    assert list(zip(*south.inner)) == [(1, 1), (2, 1), (3, 1), (4, 1)]
    assert list(zip(*south.second)) == [(1, 2), (2, 2), (3, 2), (4, 2)]
    west = edge_nodes((6, 5), 'west')
    assert list(zip(*west.second)) == [(2, 2), (2, 1), (2, 2), (2, 3), (2, 2)]


@given(density, velocity, velocity, velocity, velocity)
@settings(max_examples=50)
def test_noneq_extrapolation_reproduces_prescribed_moments(rho_b, ub, vb, uf, vf):
    rng = np.random.default_rng(1)
    f_inner = equilibrium_f_field(np.ones(3), np.full(3, uf), np.full(3, vf)) + 1e-3 * rng.standard_normal((9, 3))
    f_b, _ = bc_noneq_extrapolation(f_inner, (np.full(3, ub), np.full(3, vb)), rho_b=rho_b)
    rho, ux, uy = macroscopic(f_b)
    np.testing.assert_allclose(rho, rho_b, rtol=1e-12)
    np.testing.assert_allclose(ux, ub, atol=1e-12)
    np.testing.assert_allclose(uy, vb, atol=1e-12)


@given(density, velocity, velocity, st.floats(-0.05, 0.05), st.floats(-0.05, 0.05), st.floats(-0.05, 0.05))
def test_velocity_gradient_closure_reproduces_prescribed_moments(rho_b, ub, vb, sxx, sxy, syy):
    f_b = bc_velocity_gradient(rho_b, (ub, vb), (sxx, sxy, syy), tau_v=0.9)
    rho, ux, uy = macroscopic(f_b)
    assert rho == pytest.approx(rho_b, rel=1e-12)
    assert ux == pytest.approx(ub, abs=1e-12)
    assert uy == pytest.approx(vb, abs=1e-12)


def test_velocity_gradient_closure_without_strain_is_equilibrium():
    f_b = bc_velocity_gradient(1.0, (0.05, 0.0), (0.0, 0.0, 0.0), tau_v=0.9)
    np.testing.assert_allclose(f_b, equilibrium_f_field(1.0, 0.05, 0.0), atol=1e-15)


def test_equilibrium_interior_gives_equilibrium_boundary():
    state = initial_state((6, 6), rho=1.0, u=0.03, v=-0.01)
    expected = state.f.copy()
    BoundaryCondition(side='west', velocity=(0.03, -0.01)).apply_flow(state, LatticeModel(tau_v=0.8))
    np.testing.assert_allclose(state.f, expected, atol=1e-15)


def test_velocity_gradient_boundary_needs_strain():
    state = initial_state((6, 6))
    bc = BoundaryCondition(side='east', scheme='velocity-gradient')
    with pytest.raises(MessageError):
        bc.apply_flow(state, LatticeModel(tau_v=0.8))


def test_adiabatic_edge_extrapolates_temperature():
    shape = (6, 6)
    T = np.tile(np.array([0.0, 0.2, 0.5, 0.9, 1.4, 2.0]), (6, 1))
    state = initial_state(shape, T=T)
    BoundaryCondition(side='south').apply_energy(state)
    np.testing.assert_allclose(temperature(state.g)[1:-1, 0], (4 * 0.2 - 0.5) / 3.0, atol=1e-14)


@pytest.mark.parametrize('tau', [0.6, 0.8, 1.0])
def test_poiseuille_viscosity(tau):
    nx, ny = 4, 16
    model = LatticeModel(tau_v=tau)
    H = ny - 1
    G = 0.01 * 8.0 * model.nu / H ** 2
    walls = [BoundaryCondition(side=side, span='full', periodic=True) for side in ('south', 'north')]
    force = BodyForceSpec(Gx=G, Gy=0.0)
    state = initial_state((nx, ny))
    for _ in range(12000):
        state = step_flow(state, model, force, walls)
    _, ux, _ = macroscopic(state.f)
    j = np.arange(ny)
    q = j * (H - j)
    profile = ux.mean(axis=0)
    nu_fit = G * (q * q).sum() / (2.0 * (profile * q).sum())
    assert nu_fit == pytest.approx(model.nu, rel=0.02)


def test_taylor_green_decay_rate():
    n, U, tau = 32, 0.01, 0.8
    model = LatticeModel(tau_v=tau)
    k = 2 * np.pi / n
    X, Y = np.meshgrid(np.arange(n), np.arange(n), indexing='ij')
    pattern = np.sin(k * X) * np.cos(k * Y)
    rho = 1.0 - 3.0 * U ** 2 / 4.0 * (np.cos(2 * k * X) + np.cos(2 * k * Y))
    state = initial_state((n, n), rho=rho, u=U * pattern, v=-U * np.cos(k * X) * np.sin(k * Y))

    def amplitude(s):
        _, ux, _ = macroscopic(s.f)
        return (ux * pattern).sum() / (pattern * pattern).sum()

    for _ in range(20):
        state = step_flow(state, model)
    a1 = amplitude(state)
    for _ in range(200):
        state = step_flow(state, model)
    a2 = amplitude(state)
    nu_fit = np.log(a1 / a2) / (2 * k ** 2 * 200)
    assert nu_fit == pytest.approx(model.nu, rel=0.02)


def test_relaxation_times_and_nondimensional_transport_agree():
    tau_v, _ = relaxation_times('lid', 159, re=100)
    assert tau_v == pytest.approx(0.5 + 3 * 0.1 * 159 / 100)
    tau_v, tau_T = relaxation_times('convection', 160, ra=1e5, pr=0.71, ma=0.1)
    lattice = LatticeModel(tau_v=tau_v, tau_T=tau_T)
    transport = nondimensional_transport('convection', ra=1e5, pr=0.71, ma=0.1)
    assert lattice.nu == pytest.approx(transport.nu * 160, rel=1e-12)
    assert lattice.alpha == pytest.approx(transport.alpha * 160, rel=1e-12)
    assert transport.nu / transport.alpha == pytest.approx(0.71)
    assert buoyancy_coefficient(0.1, 160, 1e5) * 160 == pytest.approx(transport.buoyancy)


def test_relaxation_times_reject_bad_groups():
    with pytest.raises(ConfigurationError, match='re must be positive'):
        relaxation_times('lid', 32, re=-5)
    with pytest.raises(ConfigurationError):
        relaxation_times('convection', 32, ra=1e4, pr=0.0)


def test_zero_rayleigh_switches_buoyancy_off():
    assert buoyancy_coefficient(0.1, 32, 0.0) == 0.0
    assert nondimensional_transport('convection', ra=0.0, pr=0.71).buoyancy == 0.0


def test_buoyancy_lifts_fluid_next_to_the_hot_wall():
    solver = cavity_solver(CaseSpec('convection', ra=1e4, grid=17))
    solver.advance(100)
    mf = solver.macro()
    assert mf.v[1, 8] > 0.0


def test_body_force_check():
    BodyForceSpec(Gx=1e-4).check()
    with pytest.raises(ConfigurationError):
        BodyForceSpec(Gy=0.5).check()


@pytest.mark.slow
def test_small_lid_cavity_vortex():
    from hybridflow.grid import streamfunction
    from hybridflow.metrics import vortex_center
    solver = cavity_solver(CaseSpec('lid', re=100, grid=33))
    mf = solver.run(max_steps=40000, check_every=1000, steady_tol=1e-8)
    x, y = vortex_center(streamfunction(mf), mf.grid)
    assert x == pytest.approx(0.6172, abs=0.03)
    assert y == pytest.approx(0.7344, abs=0.03)


def _conduction_lattice(n, tau_T=0.8):
    return LBMSolver(GridSpec.unit_square(n), LatticeModel(tau_v=0.8, tau_T=tau_T), cavity_boundaries('convection'),
                     thermal=True)


@given(st.floats(0.0, 2.0), st.floats(-0.1, 0.1), st.floats(-0.1, 0.1), st.floats(0.55, 1.5))
@settings(max_examples=30, deadline=None)
def test_energy_step_keeps_uniform_equilibrium(T, ux, uy, tau_T):
    shape = (6, 5)
    state = initial_state(shape, u=ux, v=uy, T=T)
    new = step_energy(state, LatticeModel(tau_v=0.8, tau_T=tau_T))
    np.testing.assert_allclose(new.g, state.g, atol=1e-14)


def test_periodic_energy_step_conserves_heat():
    rng = np.random.default_rng(3)
    shape = (8, 6)
    state = initial_state(shape, u=0.05 * rng.standard_normal(shape), v=0.05 * rng.standard_normal(shape),
                          T=rng.random(shape))
    state.g += 1e-3 * rng.random(state.g.shape)
    before = temperature(state.g).sum()
    for _ in range(5):
        state = step_energy(state, LatticeModel(tau_v=0.8, tau_T=0.7))
    assert temperature(state.g).sum() == pytest.approx(before, rel=1e-13)


@pytest.mark.parametrize('n', [11, 21])
def test_conduction_limit_is_linear_up_to_the_corners(n):
    solver = _conduction_lattice(n).advance(20 * (n - 1) ** 2)
    mf = solver.macro()
    X, _ = solver.grid.coords()
    np.testing.assert_allclose(mf.u, 0.0, atol=1e-14)
    np.testing.assert_allclose(mf.T, 1.0 - X, atol=1e-6)
    profile = nusselt_profile(mf.T, solver.grid)
    np.testing.assert_allclose(profile.Nu, 1.0, atol=1e-5)
    assert profile.Nu_ave == pytest.approx(1.0, abs=1e-5)
