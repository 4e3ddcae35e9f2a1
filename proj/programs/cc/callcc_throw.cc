# escape with 41 into the context 1 + []
1 + callcc k. throw 41 to k
