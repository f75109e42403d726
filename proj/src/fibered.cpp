#include "polyfold/fibered.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyfold {

GroupoidPtr borrow(const FiniteGroupoid& g) {
  return GroupoidPtr(GroupoidPtr(), &g);
}

ObjId FiberedProduct::object_id(const ObjId& x, const MorId& phi, const ObjId& z) const {
  return "(" + x + "|" + phi + "|" + z + ")";
}

FiberedProduct weak_fibered_product(const GroupoidFunctor& F, const GroupoidFunctor& G) {
  if (F.codomain != G.codomain)
    throw std::invalid_argument("fibered product: functors must share a codomain");
  const auto& X = *F.domain;
  const auto& Y = *F.codomain;
  const auto& Z = *G.domain;

  auto oid = [](const ObjId& x, const MorId& phi, const ObjId& z) {
    return "(" + x + "|" + phi + "|" + z + ")";
  };
  auto mid = [](const MorId& h, const MorId& phi, const MorId& k) {
    return "(" + h + "|" + phi + "|" + k + ")";
  };

  FiberedProduct fp;
  fp.total = std::make_shared<FiniteGroupoid>();
  auto& L = *fp.total;
  fp.pi1.domain = fp.total.get();
  fp.pi1.codomain = &X;
  fp.pi2.domain = fp.total.get();
  fp.pi2.codomain = &Z;

  // Objects: (x, φ, z) with φ: F(x) -> G(z).
  for (const auto& x : X.objects)
    for (const auto& z : Z.objects)
      for (const auto& phi : Y.hom(F.on_object(x), G.on_object(z))) {
        ObjId o = oid(x, phi, z);
        L.objects.push_back(o);
        fp.pi1.object_map[o] = x;
        fp.pi2.object_map[o] = z;
        fp.phi_of[o] = phi;
      }
  L.sort_objects();

  // Morphisms: (h, φ, k) with φ: F(s(h)) -> G(s(k)), carried at the source.
  struct Mor {
    MorId h, phi, k;
  };
  std::vector<Mor> mors;
  for (const auto& [ih, mh] : X.morphisms)
    for (const auto& [ik, mk] : Z.morphisms)
      for (const auto& phi : Y.hom(F.on_object(mh.src), G.on_object(mk.src)))
        mors.push_back({ih, phi, ik});

  auto phi_at_target = [&](const Mor& m) {
    // φ' = G(k) ∘ φ ∘ F(h)⁻¹
    return Y.compose(G.on_morphism(m.k),
                     Y.compose(m.phi, Y.inverse.at(F.on_morphism(m.h))));
  };

  for (const auto& m : mors) {
    MorId id = mid(m.h, m.phi, m.k);
    const auto& mh = X.mor(m.h);
    const auto& mk = Z.mor(m.k);
    L.morphisms[id] = Morphism{id, oid(mh.src, m.phi, mk.src),
                               oid(mh.tgt, phi_at_target(m), mk.tgt)};
    fp.pi1.morphism_map[id] = m.h;
    fp.pi2.morphism_map[id] = m.k;
  }
  for (const auto& x : X.objects)
    for (const auto& z : Z.objects)
      for (const auto& phi : Y.hom(F.on_object(x), G.on_object(z)))
        L.identity[oid(x, phi, z)] = mid(X.identity.at(x), phi, Z.identity.at(z));
  for (const auto& m : mors)
    L.inverse[mid(m.h, m.phi, m.k)] =
        mid(X.inverse.at(m.h), phi_at_target(m), Z.inverse.at(m.k));

  // (h, φ, k) ∘ (h', ψ, k') = (h∘h', ψ, k∘k') whenever the source of the
  // first equals the target of the second (which forces φ = ψ').
  std::map<ObjId, std::vector<Mor>> by_source;
  for (const auto& m : mors)
    by_source[oid(X.mor(m.h).src, m.phi, Z.mor(m.k).src)].push_back(m);
  for (const auto& inner : mors) {
    ObjId tgt = oid(X.mor(inner.h).tgt, phi_at_target(inner), Z.mor(inner.k).tgt);
    auto it = by_source.find(tgt);
    if (it == by_source.end()) continue;
    for (const auto& outer : it->second)
      L.compose_table[{mid(outer.h, outer.phi, outer.k), mid(inner.h, inner.phi, inner.k)}] =
          mid(X.compose(outer.h, inner.h), inner.phi, Z.compose(outer.k, inner.k));
  }
  return fp;
}

bool Diagram::is_valid(std::string* why) const {
  if (!left || !middle || !right) {
    if (why) *why = "diagram: missing groupoid";
    return false;
  }
  if (back.domain != middle.get() || back.codomain != left.get() ||
      forward.domain != middle.get() || forward.codomain != right.get()) {
    if (why) *why = "diagram: leg endpoints wrong";
    return false;
  }
  if (!back.is_valid(why) || !forward.is_valid(why)) return false;
  if (!is_equivalence(back)) {
    if (why) *why = "diagram: back leg is not an equivalence";
    return false;
  }
  return true;
}

Diagram Diagram::identity(const GroupoidPtr& g) {
  Diagram d;
  d.left = d.middle = d.right = g;
  d.back = GroupoidFunctor::identity(*g);
  d.forward = d.back;
  return d;
}

Diagram Diagram::from_functor(const GroupoidPtr& x, const GroupoidPtr& y,
                              const GroupoidFunctor& f) {
  Diagram d;
  d.left = x;
  d.middle = x;
  d.right = y;
  d.back = GroupoidFunctor::identity(*x);
  d.forward = f;
  return d;
}

namespace {

NaturalTransformation identity_witness(const GroupoidFunctor& f) {
  NaturalTransformation tau;
  for (const auto& x : f.domain->objects)
    tau.component[x] = f.codomain->identity.at(f.on_object(x));
  return tau;
}

}  // namespace

bool is_refinement(const Diagram& finer, const Diagram& coarser, const RefinementWitness& w,
                   std::string* why) {
  if (finer.left.get() != coarser.left.get() || finer.right.get() != coarser.right.get())
    throw std::invalid_argument("refinement: diagrams do not share endpoints");
  if (w.H.domain != finer.middle.get() || w.H.codomain != coarser.middle.get()) {
    if (why) *why = "witness functor has wrong endpoints";
    return false;
  }
  if (!w.H.is_valid(why)) return false;
  if (!is_equivalence(w.H)) {
    if (why) *why = "witness functor is not an equivalence";
    return false;
  }
  auto back_h = GroupoidFunctor::compose(coarser.back, w.H);
  auto fwd_h = GroupoidFunctor::compose(coarser.forward, w.H);
  if (!naturally_equivalent(back_h, finer.back, w.tau_left, why)) return false;
  if (!naturally_equivalent(fwd_h, finer.forward, w.tau_right, why)) return false;
  return true;
}

RefinementWitness compose_refinement_witnesses(const Diagram& d, const Diagram& b,
                                               const Diagram& c, const RefinementWitness& outer,
                                               const RefinementWitness& inner) {
  (void)b;
  RefinementWitness w;
  w.H = GroupoidFunctor::compose(outer.H, inner.H);
  const auto& X = *d.left;
  const auto& Y = *d.right;
  for (const auto& l : c.middle->objects) {
    ObjId mid = inner.H.on_object(l);
    w.tau_left.component[l] =
        X.compose(inner.tau_left.component.at(l), outer.tau_left.component.at(mid));
    w.tau_right.component[l] =
        Y.compose(inner.tau_right.component.at(l), outer.tau_right.component.at(mid));
  }
  return w;
}

std::optional<CommonRefinement> common_refinement_of_refinements(
    const Diagram& d, const Diagram& b, const Diagram& bp, const RefinementWitness& wb,
    const RefinementWitness& wbp) {
  // Fibered product of the two witness legs over the middle of d.
  auto fp = weak_fibered_product(wb.H, wbp.H);
  const auto& A = *d.middle;
  const auto& X = *d.left;
  const auto& Y = *d.right;

  CommonRefinement out;
  out.diagram.left = d.left;
  out.diagram.middle = fp.total;
  out.diagram.right = d.right;
  out.diagram.back = GroupoidFunctor::compose(b.back, fp.pi1);
  out.diagram.forward = GroupoidFunctor::compose(b.forward, fp.pi1);

  out.onto_first.H = fp.pi1;
  out.onto_first.tau_left = identity_witness(out.diagram.back);
  out.onto_first.tau_right = identity_witness(out.diagram.forward);

  out.onto_second.H = fp.pi2;
  // Component at l = (β, φ, β'):   bp.back(β') -> b.back(β)
  //   τ1(β) ∘ d.back(φ)⁻¹ ∘ τ2(β')⁻¹, and the same shape on the forward legs.
  for (const auto& l : fp.total->objects) {
    ObjId beta = fp.pi1.on_object(l);
    ObjId betap = fp.pi2.on_object(l);
    MorId phi = fp.phi_of.at(l);
    out.onto_second.tau_left.component[l] =
        X.compose(wb.tau_left.component.at(beta),
                  X.compose(X.inverse.at(d.back.on_morphism(phi)),
                            X.inverse.at(wbp.tau_left.component.at(betap))));
    out.onto_second.tau_right.component[l] =
        Y.compose(wb.tau_right.component.at(beta),
                  Y.compose(Y.inverse.at(d.forward.on_morphism(phi)),
                            Y.inverse.at(wbp.tau_right.component.at(betap))));
  }
  (void)A;
  std::string why;
  if (!is_refinement(out.diagram, b, out.onto_first, &why)) return std::nullopt;
  if (!is_refinement(out.diagram, bp, out.onto_second, &why)) return std::nullopt;
  return out;
}

std::optional<CommonRefinement> find_common_refinement(const Diagram& a, const Diagram& b) {
  if (a.left.get() != b.left.get() || a.right.get() != b.right.get())
    throw std::invalid_argument("common refinement: diagrams do not share endpoints");
  auto fp = weak_fibered_product(a.back, b.back);
  const auto& X = *a.left;

  CommonRefinement out;
  out.diagram.left = a.left;
  out.diagram.middle = fp.total;
  out.diagram.right = a.right;
  out.diagram.back = GroupoidFunctor::compose(a.back, fp.pi1);
  out.diagram.forward = GroupoidFunctor::compose(a.forward, fp.pi1);

  out.onto_first.H = fp.pi1;
  out.onto_first.tau_left = identity_witness(out.diagram.back);
  out.onto_first.tau_right = identity_witness(out.diagram.forward);

  out.onto_second.H = fp.pi2;
  for (const auto& l : fp.total->objects) {
    // b.back(β) -> a.back(α) is φ⁻¹.
    out.onto_second.tau_left.component[l] = X.inverse.at(fp.phi_of.at(l));
  }
  auto fwd2 = GroupoidFunctor::compose(b.forward, fp.pi2);
  auto found = find_natural_transformation(fwd2, out.diagram.forward);
  if (!found) return std::nullopt;
  out.onto_second.tau_right = *found;

  std::string why;
  if (!is_refinement(out.diagram, a, out.onto_first, &why)) return std::nullopt;
  if (!is_refinement(out.diagram, b, out.onto_second, &why)) return std::nullopt;
  return out;
}

GeneralizedMap::GeneralizedMap(Diagram d) : rep_(std::move(d)) {
  std::string why;
  if (!rep_.is_valid(&why))
    throw std::invalid_argument("generalized map: bad representative: " + why);
  auto back_map = induced_orbit_map(rep_.back);
  auto fwd_map = induced_orbit_map(rep_.forward);
  auto x_orbits = orbit_space(*rep_.left);
  std::vector<int> inv(x_orbits.size(), -1);
  for (std::size_t i = 0; i < back_map.size(); ++i) inv[back_map[i]] = int(i);
  orbit_map_.assign(x_orbits.size(), -1);
  for (std::size_t i = 0; i < x_orbits.size(); ++i)
    if (inv[i] >= 0) orbit_map_[i] = fwd_map[inv[i]];
}

bool GeneralizedMap::is_s_invertible() const { return is_equivalence(rep_.forward); }

GeneralizedMap compose(const GeneralizedMap& a, const GeneralizedMap& b) {
  if (a.target().get() != b.source().get())
    throw std::invalid_argument("generalized map: endpoint mismatch in composition");
  auto fp = weak_fibered_product(a.rep_.forward, b.rep_.back);
  Diagram d;
  d.left = a.rep_.left;
  d.middle = fp.total;
  d.right = b.rep_.right;
  d.back = GroupoidFunctor::compose(a.rep_.back, fp.pi1);
  d.forward = GroupoidFunctor::compose(b.rep_.forward, fp.pi2);
  return GeneralizedMap(std::move(d));
}

GeneralizedMap s_inverse(const GeneralizedMap& a) {
  if (!a.is_s_invertible())
    throw std::invalid_argument("generalized map: forward leg is not an equivalence");
  Diagram d;
  d.left = a.representative().right;
  d.middle = a.representative().middle;
  d.right = a.representative().left;
  d.back = a.representative().forward;
  d.forward = a.representative().back;
  return GeneralizedMap(std::move(d));
}

InverseCompositeCheck diagonal_identity_witness(const GeneralizedMap& a) {
  const Diagram& rep = a.representative();
  if (!is_equivalence(rep.forward))
    throw std::invalid_argument("diagonal witness: map is not s-invertible");

  InverseCompositeCheck out{compose(a, s_inverse(a)), Diagram::identity(rep.left), {}};

  const auto& A = *rep.middle;
  const auto& Y = *rep.right;

  out.refinement.diagram.left = rep.left;
  out.refinement.diagram.middle = rep.middle;
  out.refinement.diagram.right = rep.left;
  out.refinement.diagram.back = rep.back;
  out.refinement.diagram.forward = rep.back;

  // Diagonal functor A -> A ×_Y A,  α ↦ (α, 1_{G(α)}, α).
  GroupoidFunctor diag;
  diag.domain = rep.middle.get();
  diag.codomain = out.composite.representative().middle.get();
  auto oid = [](const ObjId& x, const MorId& phi, const ObjId& z) {
    return "(" + x + "|" + phi + "|" + z + ")";
  };
  for (const auto& al : A.objects)
    diag.object_map[al] = oid(al, Y.identity.at(rep.forward.on_object(al)), al);
  for (const auto& [id, m] : A.morphisms)
    diag.morphism_map[id] = oid(id, Y.identity.at(rep.forward.on_object(m.src)), id);

  out.refinement.onto_first.H = diag;
  out.refinement.onto_first.tau_left = identity_witness(out.refinement.diagram.back);
  out.refinement.onto_first.tau_right = identity_witness(out.refinement.diagram.forward);
  std::string why;
  if (!is_refinement(out.refinement.diagram, out.composite.representative(),
                     out.refinement.onto_first, &why))
    throw std::logic_error("diagonal witness: verification failed: " + why);

  out.refinement.onto_second.H = rep.back;
  out.refinement.onto_second.tau_left = identity_witness(out.refinement.diagram.back);
  out.refinement.onto_second.tau_right = identity_witness(out.refinement.diagram.forward);
  if (!is_refinement(out.refinement.diagram, out.identity_diagram,
                     out.refinement.onto_second, &why))
    throw std::logic_error("diagonal witness: identity verification failed: " + why);
  return out;
}

}  // namespace polyfold
