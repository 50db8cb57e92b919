"""
Finite transport buffers and random arrivals
============================================

Bernoulli arrivals at both transport layers, configured above what the
network can carry. The transport buffers stay within their caps and the
auxiliary controllers still track the optimum.
"""

from coopcrn import ArrivalSpec, ElasticParams, InelasticParams, SimConfig, evaluate
from coopcrn.instances import one_relay, two_route

pu = ArrivalSpec("bernoulli", p=0.6)
su = (ArrivalSpec("bernoulli", p=0.9),)

topo, routes = two_route()
p = ElasticParams(V2=100.0, mu_M=1.0, rho=(1.0,), W_P=5.0, W_S=5.0)
cfg = SimConfig(topo, p, "elastic", routes, "arbitrary", T=50_000, seed=2,
                pu_arrivals=pu, su_arrivals=su)
res, b, rep = evaluate(cfg)
print("elastic, B4 =", round(b.B4, 3))
print("\n".join(rep.lines()))

topo, routes = one_relay()
p = InelasticParams(V1=250.0, q_M=62.0, mu_M=1.0, A_M=1.0, a_P=0.2, W_P=5.0, W_S=5.0)
cfg = SimConfig(topo, p, "inelastic", routes, "arbitrary", T=50_000, seed=2,
                pu_arrivals=pu, su_arrivals=su)
res, b, rep = evaluate(cfg)
print("\ninelastic, B3 =", round(b.B3, 3))
print("\n".join(rep.lines()))
print("avg Y_p, Z:", round(res.stats.avg_backlog["Yp"], 1), round(res.stats.avg_backlog["Z"], 1))
