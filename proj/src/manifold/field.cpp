#include "fforge/manifold/field.hpp"

namespace fforge {

VelocityGradients RiemannianField::velocity_gradients(const Vector& x, const Vector& u) const {
    const VecT<D1> ud = lift_vec<D1>(u);
    Vector nu = grad_forward([&](const VecT<D1>& xd) { return quad(xd, ud); }, x);
    return {std::move(nu), Vector(x.size())};
}

TermDerivatives RiemannianField::term_derivatives(const Vector& x, const Vector& u) const {
    auto [value, g] = split_grad([&](const VecT<D1>& xd, const VecT<D1>& ud) { return quad(xd, ud); },
                                 x, u);
    return {value, std::move(g.first), std::move(g.second)};
}

}  // namespace fforge
