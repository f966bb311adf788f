import numpy as np

from toric.errors import NotPositiveDefinite
from toric.models.jets import PotentialJet
from toric.models.reports import MetricSample


def metric_from_jet(jet: PotentialJet) -> MetricSample:
    """
    G = Hess g and derivatives of G^-1 from a jet of order >= 3:
        d_j G^-1 = -G^-1 (d_j G) G^-1
        d_j d_m G^-1 = G^-1 G_j G^-1 G_m G^-1 + G^-1 G_m G^-1 G_j G^-1 - G^-1 G_jm G^-1
    The second derivative is filled only when the jet carries order 4.
    """
    G = jet.hessian
    min_eig = float(np.linalg.eigvalsh(G)[0])
    if min_eig <= 0:
        raise NotPositiveDefinite(jet.point, min_eig)
    Ginv = np.linalg.inv(G)
    Ginv = 0.5 * (Ginv + Ginv.T)

    dGinv = None
    d2Ginv = None
    if jet.order >= 3:
        dG = jet.third
        dGinv = -np.einsum("ka,jab,bl->jkl", Ginv, dG, Ginv)
        if jet.order >= 4:
            chain = np.einsum("ka,jab,bc,mcd,dl->jmkl", Ginv, dG, Ginv, dG, Ginv)
            d2Ginv = chain + chain.transpose(1, 0, 2, 3) - np.einsum("ka,jmab,bl->jmkl", Ginv, jet.fourth, Ginv)

    return MetricSample(
        point=jet.point,
        G=G,
        Ginv=Ginv,
        detG=float(np.linalg.det(G)),
        dGinv=dGinv,
        d2Ginv=d2Ginv,
    )
