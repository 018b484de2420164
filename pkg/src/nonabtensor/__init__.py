"""Non-abelian tensor products of finite groups."""
