from nliouville.cli import main

main()
