from motivic_ie.cli import main

main()
