from hybridflow.grid.fields import GridSpec, MacroField, StaggeredField, EdgeValues, Face
from hybridflow.grid.interpolation import (interpolate_stag_to_node, interpolate_node_to_stag, stag_to_nodes,
                                           node_line_to_faces, faces_to_nodes, nodes_to_cell_centers,
                                           streamfunction)
