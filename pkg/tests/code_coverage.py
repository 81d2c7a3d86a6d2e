import os

os.system('python3 bin/qgnn verify all')
os.system('python3 bin/qgnn run-sgc --fixture path-2 --k 2 --seed 7')
os.system('python3 bin/qgnn run-gcn --fixture star-4 --seed 3')
os.system('python3 bin/qgnn run-lgc --fixture triangle')
os.system('python3 bin/qgnn run-gat --fixture triangle --t 4')
os.system('python3 bin/qgnn run-mpnn --fixture star-4 --r 0.5')
os.system('python3 bin/qgnn train --fixture star-4 --epochs 5')
os.system('python3 bin/qgnn estimate --preset sgc-large --report-format csv')
