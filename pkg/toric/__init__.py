# Kähler geometry of toric manifolds on their Delzant polytopes
