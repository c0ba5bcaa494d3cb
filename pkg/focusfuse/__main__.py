from focusfuse.app import main


main()
