from .index import Neighbor, SpatialIndex

__all__ = ['Neighbor', 'SpatialIndex']
